########################
# Lification Config    #
########################

"""
This module manages configuration for the lification workbench, providing an
environment-aware settings object shared by the CLI, the workbench facade and
the logging setup.

Key Features:
1. Environment Integration:
   - Loads LIFICATION_* variables, including those from a .env file
   - Constructor arguments win over environment values, which win over defaults

2. File System Management:
   - Log and run-history locations resolved against a base directory
   - Project root detection

3. Computation Limits:
   - Size cap for exact Smith-form and minimal-index work
   - Cap on the number of maximal minors used to certify minimal bases
   - Default refuter grid, random seed and scalar backend

4. Validation System:
   - validate() raises ConfigurationError with a precise message
"""

from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path
import logging
import os
from typing import List, Optional

from dotenv import load_dotenv

from app.exceptions import ConfigurationError

# Load environment variables from a .env file into the program's environment
load_dotenv()

DEFAULT_SMITH_SIZE_CAP = 40
DEFAULT_MINOR_CAP = 5000
DEFAULT_GRID = "1,-1,2,-2,1/2,-1/2"
VALID_FIELDS = ("rational", "gaussian", "float")


def get_project_root() -> Path:
    """
    Get the project root directory.

    Returns:
        Path: The directory two levels above this file.
    """
    current_file = Path(__file__)
    return current_file.parent.parent


def parse_grid(text: str) -> List[Fraction]:
    """
    Parse a comma separated list of rationals such as "1,-1,1/2".

    Args:
        text (str): Grid text.

    Returns:
        List[Fraction]: Parsed values, order preserved, duplicates dropped.

    Raises:
        ConfigurationError: If an entry is not a rational number.
    """
    values: List[Fraction] = []
    for item in text.split(','):
        item = item.strip()
        if not item:
            continue
        try:
            value = Fraction(item)
        except (ValueError, ZeroDivisionError) as e:
            raise ConfigurationError(f"Invalid grid entry: {item!r}") from e
        if value not in values:
            values.append(value)
    return values


@dataclass
class LificationConfig:
    """
    Workbench configuration settings.

    Holds directory paths, history limits, computation caps and defaults for
    randomized and search-based operations. Values can be set through
    environment variables or passed directly to the constructor.
    """

    def __init__(
        self,
        base_dir: Optional[Path] = None,
        max_history_size: Optional[int] = None,
        auto_save: Optional[bool] = None,
        field: Optional[str] = None,
        smith_size_cap: Optional[int] = None,
        minor_cap: Optional[int] = None,
        default_grid: Optional[str] = None,
        seed: Optional[int] = None,
        log_level: Optional[str] = None,
        default_encoding: Optional[str] = None
    ):
        """
        Initialize configuration with environment variables and defaults.

        Args:
            base_dir (Optional[Path]): Base directory for logs and history.
            max_history_size (Optional[int]): Maximum number of run records kept.
            auto_save (Optional[bool]): Whether to save history after every run.
            field (Optional[str]): Default scalar backend name.
            smith_size_cap (Optional[int]): Largest matrix dimension for Smith forms.
            minor_cap (Optional[int]): Largest number of maximal minors to enumerate.
            default_grid (Optional[str]): Refuter grid as comma separated rationals.
            seed (Optional[int]): Seed for random instance generation.
            log_level (Optional[str]): Logging level name.
            default_encoding (Optional[str]): Encoding for file operations.
        """
        project_root = get_project_root()
        self.base_dir = base_dir or Path(
            os.getenv('LIFICATION_BASE_DIR', str(project_root))
        ).resolve()

        self.max_history_size = max_history_size or int(
            os.getenv('LIFICATION_MAX_HISTORY_SIZE', '1000')
        )

        auto_save_env = os.getenv('LIFICATION_AUTO_SAVE', 'true').lower()
        self.auto_save = auto_save if auto_save is not None else (
            auto_save_env == 'true' or auto_save_env == '1'
        )

        self.field = (field or os.getenv('LIFICATION_FIELD', 'gaussian')).lower()

        self.smith_size_cap = smith_size_cap or int(
            os.getenv('LIFICATION_SMITH_SIZE_CAP', str(DEFAULT_SMITH_SIZE_CAP))
        )
        self.minor_cap = minor_cap or int(
            os.getenv('LIFICATION_MINOR_CAP', str(DEFAULT_MINOR_CAP))
        )

        self.default_grid = default_grid or os.getenv('LIFICATION_DEFAULT_GRID', DEFAULT_GRID)

        self.seed = seed if seed is not None else int(os.getenv('LIFICATION_SEED', '0'))

        self.log_level = (log_level or os.getenv('LIFICATION_LOG_LEVEL', 'INFO')).upper()

        self.default_encoding = default_encoding or os.getenv(
            'LIFICATION_DEFAULT_ENCODING', 'utf-8'
        )

    @property
    def log_dir(self) -> Path:
        """
        Get log directory path.

        Returns:
            Path: The log directory path.
        """
        return Path(os.getenv(
            'LIFICATION_LOG_DIR',
            str(self.base_dir / "logs")
        )).resolve()

    @property
    def history_dir(self) -> Path:
        """
        Get run-history directory path.

        Returns:
            Path: The history directory path.
        """
        return Path(os.getenv(
            'LIFICATION_HISTORY_DIR',
            str(self.base_dir / "history")
        )).resolve()

    @property
    def history_file(self) -> Path:
        """
        Get run-history CSV path.

        Returns:
            Path: The history file path.
        """
        return Path(os.getenv(
            'LIFICATION_HISTORY_FILE',
            str(self.history_dir / "run_history.csv")
        )).resolve()

    @property
    def log_file(self) -> Path:
        """
        Get log file path.

        Returns:
            Path: The log file path.
        """
        return Path(os.getenv(
            'LIFICATION_LOG_FILE',
            str(self.log_dir / "lification.log")
        )).resolve()

    @property
    def grid(self) -> List[Fraction]:
        """The default refuter grid as parsed rationals."""
        return parse_grid(self.default_grid)

    @property
    def numeric_log_level(self) -> int:
        """The logging level as the integer the logging module expects."""
        level = logging.getLevelName(self.log_level)
        if not isinstance(level, int):
            raise ConfigurationError(f"Unknown log level: {self.log_level}")
        return level

    def validate(self) -> None:
        """
        Validate configuration settings.

        Raises:
            ConfigurationError: If any configuration parameter is invalid.
        """
        if self.max_history_size <= 0:
            raise ConfigurationError("max_history_size must be positive")
        if self.smith_size_cap <= 0:
            raise ConfigurationError("smith_size_cap must be positive")
        if self.minor_cap <= 0:
            raise ConfigurationError("minor_cap must be positive")
        if self.field not in VALID_FIELDS:
            raise ConfigurationError(
                f"field must be one of {', '.join(VALID_FIELDS)}, got {self.field!r}"
            )
        grid = self.grid
        if not grid:
            raise ConfigurationError("default_grid must contain at least one value")
        if any(value == 0 for value in grid):
            raise ConfigurationError("default_grid must not contain zero")
        _ = self.numeric_log_level
