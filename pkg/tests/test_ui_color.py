"""
tests/test_ui_color.py

Unit tests for ColorFormatter in app/ui_color.py.
"""

import pytest
from colorama import Fore, Style

from app.ui_color import STYLES, ColorFormatter


def test_formatter_is_a_singleton():
    assert ColorFormatter() is ColorFormatter()


@pytest.mark.parametrize(
    "style, prefix",
    [
        ("success", Fore.GREEN + Style.BRIGHT),
        ("error", Fore.RED + Style.BRIGHT),
        ("warning", Fore.MAGENTA),
        ("info", Fore.YELLOW),
        ("result", Fore.CYAN + Style.BRIGHT),
        ("heading", Fore.BLUE + Style.BRIGHT),
    ]
)
def test_styles(style, prefix):
    text = ColorFormatter().styled(style, "strong: yes")
    assert text == f"{prefix}strong: yes{Style.RESET_ALL}"


def test_every_style_is_a_method():
    formatter = ColorFormatter()
    assert all(callable(getattr(formatter, style)) for style in STYLES)


def test_unknown_style():
    with pytest.raises(ValueError, match="Unknown message style: prompt"):
        ColorFormatter().styled("prompt", "x")


def test_lines():
    lines = ColorFormatter().lines([("info", "seed: 0"), ("error", "strong: no")])
    assert len(lines) == 2
    assert "seed: 0" in lines[0] and lines[1].startswith(Fore.RED)
