########################
# Color Formatting     #
########################

"""
This module provides colorized message formatting for the command-line front
end using the `colorama` library, behind a single shared formatter.

Key Features:
1. Singleton Implementation:
   - ColorFormatter() always returns the same instance

2. Standardized Color Schemes:
   - success: bright green (certificates that hold)
   - error: bright red (failures and exceptions)
   - warning: magenta (non-structured input, degenerate searches)
   - info: yellow (progress and parameters)
   - result: bright cyan (rendered polynomials, reports)
   - heading: bright blue (section titles in demos)

3. Dispatch by Name:
   - commands return (style, text) pairs; styled() and lines() format them
"""

from typing import Iterable, List, Tuple

from colorama import Fore, Style, init

# Initialize colorama for cross-platform colored output
init(autoreset=True)

STYLES = ("success", "error", "warning", "info", "result", "heading")


class ColorFormatter:
    """
    Singleton class for colorized console messages.

    Example Usage:
        >>> formatter = ColorFormatter()
        >>> print(formatter.success("strong ℓ-ification: yes"))
        >>> print(formatter.error("IncompletePlan: coefficient P_3 is not placed"))
    """

    _instance = None

    def __new__(cls):
        """Ensure only one instance of ColorFormatter exists."""
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def success(self, message: str) -> str:
        """Format success messages in bright green."""
        return f"{Fore.GREEN}{Style.BRIGHT}{message}{Style.RESET_ALL}"

    def error(self, message: str) -> str:
        """Format error messages in bright red."""
        return f"{Fore.RED}{Style.BRIGHT}{message}{Style.RESET_ALL}"

    def warning(self, message: str) -> str:
        """Format warning messages in magenta."""
        return f"{Fore.MAGENTA}{message}{Style.RESET_ALL}"

    def info(self, message: str) -> str:
        """Format informational messages in yellow."""
        return f"{Fore.YELLOW}{message}{Style.RESET_ALL}"

    def result(self, message: str) -> str:
        """Format computed results in bright cyan."""
        return f"{Fore.CYAN}{Style.BRIGHT}{message}{Style.RESET_ALL}"

    def heading(self, message: str) -> str:
        """Format section headings in bright blue."""
        return f"{Fore.BLUE}{Style.BRIGHT}{message}{Style.RESET_ALL}"

    def styled(self, style: str, message: str) -> str:
        """
        Format a message by style name, as produced by commands.

        Raises:
            ValueError: If the style is not one of STYLES.
        """
        if style not in STYLES:
            raise ValueError(f"Unknown message style: {style}")
        return getattr(self, style)(message)

    def lines(self, messages: Iterable[Tuple[str, str]]) -> List[str]:
        """Format (style, text) pairs, one formatted line per pair."""
        return [self.styled(style, text) for style, text in messages]
