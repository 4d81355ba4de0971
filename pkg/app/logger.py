########################
# Logging Management   #
########################

"""
This module sets up file logging for the workbench from LificationConfig.

Key Features:
1. Single Entry Point:
   - configure_logging() creates the log directory and installs the file handler
   - Level comes from LIFICATION_LOG_LEVEL

2. Shared Format:
   - Every record is written as "time - level - message"
   - Library modules log through the root logger with plain f-strings
"""

import logging
from pathlib import Path
from typing import Optional

from app.lification_config import LificationConfig


def configure_logging(config: Optional[LificationConfig] = None) -> None:
    """
    Configure Python logging using settings from LificationConfig.

    Ensures the log directory exists and sets up file logging at the
    configured level.

    Args:
        config (Optional[LificationConfig]): Settings to use; a fresh config
            is loaded from the environment when omitted.
    """
    if config is None:
        config = LificationConfig()

    log_dir = Path(config.log_dir)
    log_dir.mkdir(parents=True, exist_ok=True)
    log_file = Path(config.log_file)

    logging.basicConfig(
        filename=str(log_file),
        level=config.numeric_log_level,
        format='%(asctime)s - %(levelname)s - %(message)s',
        force=True
    )
    logging.info(f"Logging initialized at: {log_file}")
