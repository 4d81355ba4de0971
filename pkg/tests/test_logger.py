"""
tests/test_logger.py

Unit tests for the configure_logging() function in the logger module.

These tests cover:
- Log directory and file creation under a specified or environment-based base directory.
- The configured level deciding which records reach the file.
- Proper teardown of logging handlers to avoid cross-test contamination.
"""

import logging
from pathlib import Path

from app.lification_config import LificationConfig
from app.logger import configure_logging


def _teardown_logging():
    for handler in list(logging.root.handlers):
        handler.close()
    logging.root.handlers.clear()


def _flushed_log(config):
    for handler in logging.root.handlers:
        handler.flush()
    return config.log_file.read_text(encoding=config.default_encoding)


def test_configure_creates_log_directory_and_file(tmp_path: Path):
    config = LificationConfig(base_dir=tmp_path)
    assert not config.log_dir.exists()

    configure_logging(config)

    try:
        assert config.log_dir.is_dir()
        assert config.log_file.exists()
        assert "Logging initialized" in config.log_file.read_text(encoding="utf-8")
    finally:
        _teardown_logging()


def test_configured_level_filters_records(tmp_path: Path):
    config = LificationConfig(base_dir=tmp_path, log_level="error")
    configure_logging(config)

    try:
        logging.info("an info line that should be dropped")
        logging.error("an error line that should be kept")
        content = _flushed_log(config)
        assert "an error line that should be kept" in content
        assert "an info line that should be dropped" not in content
    finally:
        _teardown_logging()


def test_record_format(tmp_path: Path):
    config = LificationConfig(base_dir=tmp_path)
    configure_logging(config)

    try:
        logging.warning("structure check failed")
        assert " - WARNING - structure check failed" in _flushed_log(config)
    finally:
        _teardown_logging()


def test_configure_without_argument_respects_environment_base_dir(tmp_path: Path, monkeypatch):
    monkeypatch.setenv('LIFICATION_BASE_DIR', str(tmp_path))

    configure_logging()
    try:
        cfg = LificationConfig()
        assert cfg.base_dir == tmp_path.resolve()
        assert cfg.log_file.exists()
    finally:
        _teardown_logging()
