"""
tests/test_history.py

This module tests the workbench's run history: CSV persistence through
pandas and the observers notified after every run.

Test Cases:
1. File Not Found:
   - Verifies empty history when the file doesn't exist

2. Save and Load:
   - Records written by one workbench are read back by the next
   - The history is trimmed to max_history_size on load

3. Data Validation:
   - Missing required columns, empty files and malformed CSV raise OperationError
   - A broken history file does not stop the workbench from starting

4. Observers:
   - LoggingObserver logs successful runs at INFO and failed runs at WARNING
   - AutoSaveObserver saves only when auto_save is enabled
"""

from unittest.mock import Mock, patch

import pandas as pd
import pytest

from app.exceptions import OperationError
from app.history import AutoSaveObserver, LoggingObserver
from app.lification_config import LificationConfig
from app.run_record import RunRecord
from app.workbench import LificationWorkbench


def make_workbench(tmp_path, **kwargs):
    return LificationWorkbench(config=LificationConfig(base_dir=tmp_path, auto_save=False, **kwargs))


# --------------------------------------------------------
# Case 1: File does not exist → empty history
# --------------------------------------------------------
def test_load_history_file_not_found(workbench):
    assert not workbench.config.history_file.exists()
    workbench.load_history()
    assert workbench.history == []


# --------------------------------------------------------
# Case 2: Save and load
# --------------------------------------------------------
def test_history_survives_a_restart(tmp_path):
    first = make_workbench(tmp_path)
    first.record(RunRecord("build", structure="T-symmetric", ell=1, d=1, k=3, n=2, census=11))
    first.record(RunRecord("verify", outcome="failed", detail="strong=False"))
    first.save_history()

    second = make_workbench(tmp_path)
    assert second.history == first.history
    assert second.history[0].census == 11
    assert second.history[1].ell is None


def test_load_trims_to_max_history_size(tmp_path):
    first = make_workbench(tmp_path)
    for k in range(1, 6):
        first.record(RunRecord("random", k=k))
    first.save_history()

    second = make_workbench(tmp_path, max_history_size=2)
    assert [r.k for r in second.history] == [4, 5]


def test_empty_history_saves_header_only(workbench):
    workbench.save_history()
    df = pd.read_csv(workbench.config.history_file)
    assert df.empty
    assert list(df.columns)[0] == "command"


# --------------------------------------------------------
# Case 3: Invalid files
# --------------------------------------------------------
def test_load_history_missing_columns(workbench):
    workbench.config.history_file.write_text("command,outcome\nbuild,ok\n", encoding="utf-8")
    with pytest.raises(OperationError, match="Missing required columns"):
        workbench.load_history()


def test_load_history_empty_file(workbench):
    workbench.config.history_file.write_text("", encoding="utf-8")
    with pytest.raises(OperationError, match="history file is empty or corrupted"):
        workbench.load_history()


@patch("app.workbench.pd.read_csv", side_effect=pd.errors.ParserError("bad CSV"))
@patch("app.workbench.logging.error")
def test_load_history_parser_error(mock_log_error, mock_read_csv, workbench):
    workbench.config.history_file.write_text("x", encoding="utf-8")
    with pytest.raises(OperationError, match="malformed CSV file: bad CSV"):
        workbench.load_history()
    assert "Malformed CSV file" in str(mock_log_error.call_args[0][0])


@patch("app.workbench.pd.read_csv", side_effect=Exception("File read error"))
def test_load_history_read_failure(mock_read_csv, workbench):
    workbench.config.history_file.write_text("x", encoding="utf-8")
    with pytest.raises(OperationError, match="failed to load history: File read error"):
        workbench.load_history()


def test_load_history_invalid_rows(workbench):
    record = RunRecord("build").to_dict()
    record["timestamp"] = "not a time"
    pd.DataFrame([record]).to_csv(workbench.config.history_file, index=False)
    with pytest.raises(OperationError, match="Invalid run record"):
        workbench.load_history()


def test_broken_history_does_not_stop_startup(tmp_path):
    config = LificationConfig(base_dir=tmp_path)
    config.history_dir.mkdir(parents=True)
    config.history_file.write_text("", encoding="utf-8")
    with patch("app.workbench.logging.warning") as mock_warning:
        workbench = LificationWorkbench(config=config)
    assert workbench.history == []
    assert "Could not load existing history" in str(mock_warning.call_args[0][0])


@patch("app.workbench.pd.DataFrame.to_csv", side_effect=OSError("disk full"))
def test_save_history_failure(mock_to_csv, workbench):
    with pytest.raises(OperationError, match="Failed to save history: disk full"):
        workbench.save_history()


# -----------------------
# LoggingObserver Tests
# -----------------------
@patch('logging.info')
def test_logging_observer_logs_successful_run(logging_info_mock):
    record = RunRecord("demo", detail="quartic, seed 0")
    LoggingObserver().update(record)
    logging_info_mock.assert_called_once_with(f"Run finished: {record}")


@patch('logging.warning')
def test_logging_observer_warns_on_failed_run(logging_warning_mock):
    record = RunRecord("verify", outcome="failed")
    LoggingObserver().update(record)
    logging_warning_mock.assert_called_once_with("Run finished: verify: failed")


@pytest.mark.parametrize("observer", [LoggingObserver(), AutoSaveObserver(Mock(config=Mock(), save_history=Mock()))])
def test_observer_rejects_missing_record(observer):
    with pytest.raises(AttributeError):
        observer.update(None)


# -----------------------
# AutoSaveObserver Tests
# -----------------------
@pytest.mark.parametrize("auto_save, saves", [(True, 1), (False, 0)])
def test_autosave_observer(auto_save, saves):
    workbench = Mock(config=Mock(auto_save=auto_save), save_history=Mock())
    AutoSaveObserver(workbench).update(RunRecord("random"))
    assert workbench.save_history.call_count == saves


def test_autosave_observer_needs_a_workbench():
    with pytest.raises(TypeError, match="must have 'config' and 'save_history'"):
        AutoSaveObserver(object())


def test_autosave_observer_writes_the_file(tmp_path):
    workbench = LificationWorkbench(config=LificationConfig(base_dir=tmp_path, auto_save=True))
    workbench.add_observer(AutoSaveObserver(workbench))
    workbench.record(RunRecord("random", k=3))
    assert workbench.config.history_file.exists()
    assert pd.read_csv(workbench.config.history_file)["k"].tolist() == [3]
