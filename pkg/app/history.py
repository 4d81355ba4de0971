########################
# History Management   #
########################

"""
This module implements the observers notified after every workbench run.

Key Features:
1. Observer Base Class:
   - RunObserver defines update(record) for reacting to finished runs

2. Logging:
   - LoggingObserver writes one log line per run record

3. Auto-Save:
   - AutoSaveObserver saves the run history after each run when auto_save
     is enabled in LificationConfig
   - The workbench passed in must expose config and save_history
"""

from abc import ABC, abstractmethod
import logging
from typing import Any

from app.run_record import RunRecord


class RunObserver(ABC):
    """Interface for objects that react to finished workbench runs."""

    @abstractmethod
    def update(self, record: RunRecord) -> None:
        """
        Handle a finished run.

        Args:
            record (RunRecord): The record of the run.
        """
        pass  # pragma: no cover


class LoggingObserver(RunObserver):
    """Logs every run record."""

    def update(self, record: RunRecord) -> None:
        if record is None:
            raise AttributeError("Run record cannot be None")
        log = logging.info if record.succeeded else logging.warning
        log(f"Run finished: {record}")


class AutoSaveObserver(RunObserver):
    """Saves the workbench history after every run when auto-save is on."""

    def __init__(self, workbench: Any):
        """
        Args:
            workbench (Any): Must have 'config' and 'save_history' attributes.

        Raises:
            TypeError: If the workbench lacks the required attributes.
        """
        if not hasattr(workbench, 'config') or not hasattr(workbench, 'save_history'):
            raise TypeError("Workbench must have 'config' and 'save_history' attributes")
        self.workbench = workbench

    def update(self, record: RunRecord) -> None:
        if record is None:
            raise AttributeError("Run record cannot be None")
        if self.workbench.config.auto_save:
            self.workbench.save_history()
            logging.info("History auto-saved")
