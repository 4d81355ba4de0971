"""
tests/test_commands.py

Tests for the command objects and CommandFactory in app/commands.py.

This module covers:
- Option validation when a command is created.
- Execution against a LificationWorkbench rooted in a temporary directory,
  with polynomial and lification files written through app.serialization.
- Exit codes: 0 when a certificate holds, 1 when it does not.
- Factory lookup and dynamic registration.
"""

import json

import numpy as np
import pytest

from app.commands import (
    EXIT_FAILED,
    EXIT_OK,
    BuildCommand,
    Command,
    CommandFactory,
    CommandResult,
    HistoryCommand,
    RandomCommand,
    RecoverCommand,
    RefuteQuarticCommand,
    VerifyCommand,
)
from app.engine import frobenius_pencil
from app.exceptions import ValidationError
from app.matpoly import random_matrix_polynomial
from app.scalar import Backend
from app.serialization import read_lification, read_polynomial, write_lification, write_polynomial


@pytest.fixture
def palindromic_file(workbench, tmp_path):
    # A seeded 2x2 T-palindromic cubic written to P.json
    path = tmp_path / "P.json"
    RandomCommand("palindromic", 2, 3, path, seed=4).execute(workbench)
    return path


# ------------------------------------------------------------
# TEST: CommandResult
# ------------------------------------------------------------
def test_command_result_collects_messages():
    result = CommandResult().say("info", "a").say("success", "b")
    assert result.exit_code == EXIT_OK
    assert result.messages == [("info", "a"), ("success", "b")]


# ------------------------------------------------------------
# TEST: random
# ------------------------------------------------------------
def test_random_command_writes_polynomial(workbench, tmp_path):
    path = tmp_path / "R.json"
    result = RandomCommand("T-even", "2", "4", path, field="gaussian", seed=11).execute(workbench)
    assert result.exit_code == EXIT_OK
    assert "(seed 11)" in result.messages[0][1]
    P = read_polynomial(path)
    assert P.same_values(result.payload)
    assert P.backend is Backend.GAUSSIAN
    assert P.grade == 4


def test_random_command_falls_back_to_configured_seed(workbench, tmp_path):
    result = RandomCommand("odd", 1, 3, tmp_path / "R.json").execute(workbench)
    assert result.messages[0][1].endswith("(seed 0)")


@pytest.mark.parametrize(
    "options, message",
    [
        ({"structure": "cyclic", "n": 2, "grade": 3}, "Invalid structure"),
        ({"structure": "even", "n": 0, "grade": 3}, "n must be positive"),
        ({"structure": "even", "n": 2, "grade": "x"}, "grade must be an integer"),
        ({"structure": "even", "n": 2, "grade": 3, "field": "p-adic"}, "Unknown field"),
    ]
)
def test_random_command_rejects_options(tmp_path, options, message):
    with pytest.raises(ValidationError, match=message):
        RandomCommand(out=tmp_path / "R.json", **options)


# ------------------------------------------------------------
# TEST: build and sparse
# ------------------------------------------------------------
def test_build_command_writes_lification(workbench, palindromic_file, tmp_path):
    out = tmp_path / "L.json"
    result = BuildCommand(palindromic_file, "palindromic", 1, out=out, pretty=True).execute(workbench)
    assert result.exit_code == EXIT_OK
    styles = [style for style, _ in result.messages]
    assert styles == ["success", "info", "result"]
    assert "plan stacked, condition DS" in result.messages[0][1]
    L = read_lification(out)
    assert L.base.same_values(result.payload.L.base)


def test_build_command_rejects_missing_input(tmp_path):
    with pytest.raises(ValidationError, match="no such file"):
        BuildCommand(tmp_path / "missing.json", "palindromic", 1)


def test_build_command_reads_plan_file(workbench, palindromic_file, tmp_path):
    plan_file = tmp_path / "plan.json"
    plan_file.write_text("[]", encoding="utf-8")
    with pytest.raises(ValidationError):
        BuildCommand(palindromic_file, "palindromic", 1, plan=str(plan_file))


def test_sparse_command(workbench, tmp_path):
    path = tmp_path / "P.json"
    RandomCommand("palindromic", 2, 10, path, field="rational", seed=7).execute(workbench)
    result = CommandFactory.create_command("sparse", input=path, structure="palindromic", ell=2).execute(workbench)
    sparse_result, report = result.payload
    assert sparse_result.plan_name == "sparse"
    assert result.messages[0] == ("success", "T-palindromic ℓ=2, d=2: 13 nonzero blocks (sparse bound 13)")


# ------------------------------------------------------------
# TEST: verify
# ------------------------------------------------------------
def test_verify_command_strong(workbench, tmp_path):
    P = random_matrix_polynomial(np.random.default_rng(21), 2, 2, 3, Backend.RATIONAL)
    poly, lif, report = tmp_path / "P.json", tmp_path / "L.json", tmp_path / "report.json"
    write_polynomial(poly, P)
    write_lification(lif, frobenius_pencil(P))

    result = VerifyCommand(lif, poly, 1, report=report, seed=5).execute(workbench)
    assert result.exit_code == EXIT_OK
    assert ("success", "strong: yes") in result.messages
    data = json.loads(report.read_text(encoding="utf-8"))
    assert data["seed"] == 5


def test_verify_built_lification_with_structure(workbench, palindromic_file, tmp_path):
    out = tmp_path / "L.json"
    BuildCommand(palindromic_file, "palindromic", 1, out=out).execute(workbench)
    result = VerifyCommand(out, palindromic_file, 1, structure="palindromic").execute(workbench)
    assert result.exit_code == EXIT_OK
    assert ("success", "T-palindromic: yes") in result.messages


def test_verify_command_fails_for_wrong_polynomial(workbench, palindromic_file, tmp_path):
    out, other = tmp_path / "L.json", tmp_path / "Q.json"
    BuildCommand(palindromic_file, "palindromic", 1, out=out).execute(workbench)
    RandomCommand("palindromic", 2, 3, other, seed=5).execute(workbench)
    result = VerifyCommand(out, other, 1).execute(workbench)
    assert result.exit_code == EXIT_FAILED
    assert workbench.history[-1].outcome == "failed"


# ------------------------------------------------------------
# TEST: recover
# ------------------------------------------------------------
def test_recover_command_matches_input(workbench, palindromic_file, tmp_path):
    lif, out = tmp_path / "L.json", tmp_path / "back.json"
    BuildCommand(palindromic_file, "palindromic", 1, out=lif).execute(workbench)
    result = RecoverCommand(lif, 1, structure="palindromic", out=out, poly=palindromic_file).execute(workbench)
    assert result.exit_code == EXIT_OK
    assert ("success", f"matches {palindromic_file}") in result.messages
    assert read_polynomial(out).same_values(read_polynomial(palindromic_file))


def test_recover_command_reports_mismatch(workbench, palindromic_file, tmp_path):
    lif, other = tmp_path / "L.json", tmp_path / "Q.json"
    BuildCommand(palindromic_file, "palindromic", 1, out=lif).execute(workbench)
    RandomCommand("palindromic", 2, 3, other, seed=5).execute(workbench)
    result = RecoverCommand(lif, 1, mobius="A3", poly=other).execute(workbench)
    assert result.exit_code == EXIT_FAILED
    assert result.messages[-1][0] == "result"


def test_recover_needs_structure_or_mobius(palindromic_file):
    with pytest.raises(ValidationError, match="recover needs a structure or a Möbius matrix"):
        RecoverCommand(palindromic_file, 1)


# ------------------------------------------------------------
# TEST: refute-quartic
# ------------------------------------------------------------
def test_refute_command(workbench, tmp_path):
    report = tmp_path / "refute.json"
    result = RefuteQuarticCommand("even", grid="1", report=report).execute(workbench)
    assert result.exit_code == EXIT_OK
    assert result.messages[0] == ("info", "T-even, grid {1}")
    assert result.messages[1][1].startswith(f"{5 ** 7} templates tested")
    data = json.loads(report.read_text(encoding="utf-8"))
    assert data["seed"] == 0


def test_refute_command_degenerate(workbench):
    result = RefuteQuarticCommand("skew", grid="1").execute(workbench)
    assert result.messages[1][0] == "warning"


def test_refute_command_rejects_partition():
    with pytest.raises(ValidationError):
        RefuteQuarticCommand("even", partition="3/2")


# ------------------------------------------------------------
# TEST: history
# ------------------------------------------------------------
def test_history_command(workbench, tmp_path):
    assert HistoryCommand().execute(workbench).messages == [("info", "No runs recorded")]

    RandomCommand("even", 1, 2, tmp_path / "R.json").execute(workbench)
    shown = HistoryCommand().execute(workbench)
    assert shown.messages[0][0] == "result"
    assert "random" in shown.messages[0][1]
    assert len(shown.payload) == 1

    cleared = HistoryCommand(clear=True).execute(workbench)
    assert cleared.messages == [("success", "History cleared")]
    assert workbench.history == []
    assert workbench.config.history_file.exists()


# ------------------------------------------------------------
# TEST: demo
# ------------------------------------------------------------
def test_demo_command(workbench, tmp_path):
    report = tmp_path / "demo.json"
    result = CommandFactory.create_command("demo", name="quartic", seed=1, report=report).execute(workbench)
    assert result.exit_code == EXIT_OK
    assert result.messages[0][0] == "heading"
    assert json.loads(report.read_text(encoding="utf-8"))["seed"] == 1


# ------------------------------------------------------------
# TEST: CommandFactory
# ------------------------------------------------------------
def test_factory_names():
    assert CommandFactory.names() == [
        "build", "sparse", "verify", "recover", "refute-quartic", "demo", "history", "random"
    ]


def test_factory_unknown_command():
    with pytest.raises(ValueError, match="Unknown command: factor"):
        CommandFactory.create_command("factor")


def test_factory_rejects_non_command():
    with pytest.raises(TypeError, match="must inherit from Command"):
        CommandFactory.register_command("bad", dict)


def test_factory_registers_command(workbench):
    class Ping(Command):
        NAME = "ping"

        def __init__(self, **_):
            pass

        def execute(self, receiver):
            return CommandResult(payload=self.run_seed(receiver))

    CommandFactory.register_command("Ping", Ping)
    try:
        command = CommandFactory.create_command("PING")
        assert str(command) == "ping"
        assert workbench.execute_command(command).payload == 0
    finally:
        CommandFactory._commands.pop("ping")
