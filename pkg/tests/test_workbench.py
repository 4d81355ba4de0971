"""
tests/test_workbench.py

Unit tests for LificationWorkbench in app/workbench.py.

These tests verify:
- every operation runs the library and appends one RunRecord
- failures are recorded with outcome "error" before the exception propagates
- certificates that do not hold are recorded as "failed"
- observers, the history bound and the DataFrame view
"""

from unittest.mock import Mock

import numpy as np
import pytest

from app.engine import frobenius_pencil
from app.exceptions import ConfigurationError, GradeNotOddMultiple, OperationError, StructureCheckFailed
from app.lification_config import LificationConfig
from app.matpoly import MatrixPolynomial, random_matrix_polynomial
from app.mobius import MobiusMatrix
from app.run_record import RECORD_COLUMNS, RunRecord
from app.scalar import Backend
from app.structures import StructureKind, StructureTag
from app.workbench import LificationWorkbench

Q = Backend.RATIONAL
PALIN = StructureTag(StructureKind.PALINDROMIC)
SYM = StructureTag(StructureKind.SYMMETRIC)


def scalar_poly(*coeffs, grade=None):
    return MatrixPolynomial.from_rows([[[c]] for c in coeffs], Q, grade)


# ------------------------------------------------------------
# TEST: Setup
# ------------------------------------------------------------
def test_workbench_creates_history_directory(workbench):
    assert workbench.config.history_dir.is_dir()
    assert workbench.history == []
    assert workbench.observers == []


def test_invalid_configuration_is_rejected(tmp_path):
    with pytest.raises(ConfigurationError, match="max_history_size must be positive"):
        LificationWorkbench(config=LificationConfig(base_dir=tmp_path, max_history_size=0))


# ------------------------------------------------------------
# TEST: random_polynomial
# ------------------------------------------------------------
def test_random_polynomial_uses_configured_seed(workbench):
    first = workbench.random_polynomial(PALIN, 2, 3)
    second = workbench.random_polynomial(PALIN, 2, 3, seed=0)
    assert first.same_values(second)
    assert first.backend is Q
    assert workbench.history[-1] == RunRecord("random", structure="T-palindromic", k=3, n=2, detail="seed 0")


def test_random_polynomial_backend_override(workbench):
    P = workbench.random_polynomial(SYM, 1, 2, backend=Backend.GAUSSIAN, seed=3)
    assert P.backend is Backend.GAUSSIAN
    assert P.grade == 2


# ------------------------------------------------------------
# TEST: build and sparse
# ------------------------------------------------------------
def test_build_records_the_run(workbench):
    P = workbench.random_polynomial(PALIN, 2, 3, seed=5)
    result = workbench.build(P, PALIN, 1)
    record = workbench.history[-1]
    assert record.command == "build"
    assert (record.structure, record.ell, record.d, record.k, record.n) == ("T-palindromic", 1, 1, 3, 2)
    assert record.census == result.census()
    assert record.detail == f"plan stacked, size {result.size}"
    assert record.succeeded


def test_build_failure_is_recorded(workbench):
    P = workbench.random_polynomial(SYM, 1, 4, seed=1)
    with pytest.raises(GradeNotOddMultiple):
        workbench.build(P, SYM, 1)
    record = workbench.history[-1]
    assert record.outcome == "error"
    assert record.detail.startswith("GradeNotOddMultiple: Grade 4")
    assert record.d is None


def test_unknown_plan_is_recorded(workbench):
    P = workbench.random_polynomial(SYM, 1, 3, seed=1)
    with pytest.raises(ValueError, match="Unknown plan: nowhere"):
        workbench.build(P, SYM, 1, plan="nowhere")
    assert workbench.history[-1].outcome == "error"


def test_strict_build_rejects_unstructured_input(workbench):
    P = random_matrix_polynomial(np.random.default_rng(2), 2, 2, 3, Q)
    with pytest.raises(StructureCheckFailed):
        workbench.build(P, PALIN, 1, strict=True)
    assert workbench.history[-1].outcome == "error"


def test_sparse_reports_block_count(workbench):
    P = workbench.random_polynomial(PALIN, 2, 10, seed=7)
    result, report = workbench.sparse(P, PALIN, 2)
    assert result.plan_name == "sparse"
    assert report.census == 13
    assert workbench.history[-1].command == "sparse"
    assert workbench.history[-1].census == 13


# ------------------------------------------------------------
# TEST: verify
# ------------------------------------------------------------
def test_verify_strong_lification(workbench):
    P = random_matrix_polynomial(np.random.default_rng(21), 2, 2, 3, Q)
    report = workbench.verify(frobenius_pencil(P), P, 1)
    assert report.is_strong
    record = workbench.history[-1]
    assert record.outcome == "ok"
    assert record.census == 7
    assert record.detail == "L 6x6, lification=True, strong=True"


def test_verify_weak_lification_is_failed(workbench):
    report = workbench.verify(scalar_poly(0, 1), scalar_poly(0, 1, grade=2), 1)
    assert report.is_lification and not report.is_strong
    assert workbench.history[-1].outcome == "failed"


# ------------------------------------------------------------
# TEST: recover
# ------------------------------------------------------------
def test_recover_from_structure(workbench):
    P = workbench.random_polynomial(PALIN, 2, 3, seed=9)
    result = workbench.build(P, PALIN, 1)
    recovery = workbench.recover(result.L, PALIN, 1, 2)
    assert recovery.polynomial.same_values(P)
    assert workbench.history[-1] == RunRecord("recover", structure="T-palindromic", ell=1, d=1, k=3, n=2,
                                              detail="recovered grade 3")


def test_recover_from_mobius_matrix(workbench):
    P = workbench.random_polynomial(PALIN, 2, 3, seed=9)
    result = workbench.build(P, PALIN, 1)
    recovery = workbench.recover(result.L, None, 1, 2, mobius=MobiusMatrix.named("A3", Q), sign=1)
    assert recovery.polynomial.same_values(P)


@pytest.mark.parametrize(
    "structure, n, message",
    [
        (PALIN, 3, "no odd number of 3x3 block rows"),
        (None, 2, "Recovery needs a structure or a Möbius matrix"),
    ]
)
def test_recover_errors(workbench, structure, n, message):
    P = workbench.random_polynomial(PALIN, 2, 3, seed=9)
    L = workbench.build(P, PALIN, 1).L
    with pytest.raises(OperationError, match=message):
        workbench.recover(L, structure, 1, n)
    assert workbench.history[-1].outcome == "error"


# ------------------------------------------------------------
# TEST: refute and demo
# ------------------------------------------------------------
def test_refute_records_template_count(workbench):
    report = workbench.refute(StructureTag(StructureKind.EVEN), [1])
    assert report.templates_tested == 5 ** 7
    record = workbench.history[-1]
    assert (record.command, record.ell, record.k, record.n) == ("refute-quartic", 2, 4, 1)
    assert record.detail.startswith(f"{5 ** 7} templates")


def test_demo_records_outcome(workbench):
    outcome = workbench.demo("quartic")
    assert outcome.passed
    assert workbench.history[-1] == RunRecord("demo", detail="quartic, seed 0")


def test_unknown_demo_is_recorded(workbench):
    with pytest.raises(ValueError, match="Unknown demo"):
        workbench.demo("nowhere", seed=3)
    assert workbench.history[-1].outcome == "error"


# ------------------------------------------------------------
# TEST: Observers and history
# ------------------------------------------------------------
def test_observers_are_notified(workbench):
    observer = Mock()
    workbench.add_observer(observer)
    record = workbench.record(RunRecord("history"))
    observer.update.assert_called_once_with(record)

    workbench.remove_observer(observer)
    workbench.record(RunRecord("history"))
    assert observer.update.call_count == 1


def test_history_is_bounded(tmp_path):
    workbench = LificationWorkbench(config=LificationConfig(base_dir=tmp_path, max_history_size=2, auto_save=False))
    for k in (1, 3, 5):
        workbench.record(RunRecord("random", k=k))
    assert [r.k for r in workbench.history] == [3, 5]


def test_history_views(workbench):
    workbench.record(RunRecord("build", structure="T-even", census=19))
    df = workbench.get_history_dataframe()
    assert list(df.columns) == list(RECORD_COLUMNS)
    assert df.iloc[0]["census"] == "19"
    assert workbench.show_history() == ["build T-even: ok, 19 blocks"]
    workbench.clear_history()
    assert workbench.history == []
    assert workbench.get_history_dataframe().empty


def test_execute_command(workbench):
    command = Mock()
    command.execute.return_value = "done"
    assert workbench.execute_command(command) == "done"
    command.execute.assert_called_once_with(workbench)
