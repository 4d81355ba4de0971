"""
tests/conftest.py

Shared fixtures: every test starts without LIFICATION_* overrides, and
workbench tests get a LificationWorkbench rooted in a temporary directory.
"""

import logging
import os

import pytest

from app.lification_config import LificationConfig
from app.workbench import LificationWorkbench


@pytest.fixture(autouse=True)
def clean_environment(monkeypatch):
    for name in list(os.environ):
        if name.startswith("LIFICATION_"):
            monkeypatch.delenv(name)


@pytest.fixture
def workbench(tmp_path):
    config = LificationConfig(base_dir=tmp_path, auto_save=False, field="rational")
    yield LificationWorkbench(config=config)
    for handler in list(logging.root.handlers):
        handler.close()
    logging.root.handlers.clear()
