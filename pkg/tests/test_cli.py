"""
tests/test_cli.py

End-to-end tests for the `lification` command-line front end in app/cli.py.

These tests verify:
- the random → build → verify → recover round trip through JSON files
- exit codes: 0 on success, 1 when a certificate fails, 2 on usage errors
- the seed echo for randomized commands
- help text listing the registered plans and demos
"""

import logging

import pytest

from app.cli import build_parser, demo_help, main, plan_help
from app.lification_config import LificationConfig
from app.run_record import RunRecord
from app.workbench import LificationWorkbench


@pytest.fixture
def config(tmp_path):
    yield LificationConfig(base_dir=tmp_path)
    for handler in list(logging.root.handlers):
        handler.close()
    logging.root.handlers.clear()


def run(config, *argv):
    return main([str(a) for a in argv], config=config)


@pytest.fixture
def cubic(config, tmp_path):
    path = tmp_path / "P.json"
    assert run(config, "random", "--structure", "palin", "--n", 2, "--grade", 3, "--out", path,
               "--field", "rational", "--seed", 4) == 0
    return path


# ------------------------------------------------------------
# TEST: Round trip
# ------------------------------------------------------------
def test_random_echoes_seed(config, tmp_path, capsys):
    assert run(config, "random", "--structure", "even", "--n", 1, "--grade", 2, "--out", tmp_path / "R.json") == 0
    out = capsys.readouterr().out
    assert "seed: 0" in out
    assert (tmp_path / "R.json").exists()


def test_build_verify_recover(config, cubic, tmp_path, capsys):
    lif = tmp_path / "L.json"
    assert run(config, "build", "--input", cubic, "--structure", "palin", "--ell", 1, "--out", lif, "--pretty") == 0
    assert lif.exists()
    assert run(config, "verify", "--lification", lif, "--poly", cubic, "--ell", 1,
               "--structure", "palin", "--seed", 3) == 0
    assert run(config, "recover", "--lification", lif, "--ell", 1, "--structure", "palin", "--poly", cubic) == 0
    out = capsys.readouterr().out
    assert "seed: 3" in out
    assert "strong: yes" in out
    assert f"matches {cubic}" in out


def test_sparse_subcommand(config, cubic, capsys):
    assert run(config, "sparse", "--input", cubic, "--structure", "palin", "--ell", 1) == 0
    assert "nonzero blocks (sparse bound" in capsys.readouterr().out


def test_verify_against_wrong_polynomial_fails(config, cubic, tmp_path):
    lif, other = tmp_path / "L.json", tmp_path / "Q.json"
    run(config, "build", "--input", cubic, "--structure", "palin", "--ell", 1, "--out", lif)
    run(config, "random", "--structure", "palin", "--n", 2, "--grade", 3, "--out", other,
        "--field", "rational", "--seed", 5)
    assert run(config, "verify", "--lification", lif, "--poly", other, "--ell", 1) == 1


def test_runs_are_saved_to_history(config, cubic, capsys):
    workbench = LificationWorkbench(config)
    assert workbench.history[-1] == RunRecord("random", structure="T-palindromic", k=3, n=2, detail="seed 4")
    assert run(config, "history") == 0
    assert "T-palindromic" in capsys.readouterr().out


def test_demo_subcommand(config, capsys):
    assert run(config, "demo", "quartic", "--seed", 1) == 0
    out = capsys.readouterr().out
    assert "seed: 1" in out
    assert "✓" in out


def test_refute_subcommand(config, capsys):
    assert run(config, "refute-quartic", "--structure", "even", "--grid", "1") == 0
    assert f"{5 ** 7} templates tested" in capsys.readouterr().out


# ------------------------------------------------------------
# TEST: Exit codes for bad input
# ------------------------------------------------------------
@pytest.mark.parametrize(
    "argv",
    [
        [],
        ["factor"],
        ["random", "--structure", "even", "--n", "two", "--grade", "2", "--out", "x.json"],
        ["random", "--structure", "cyclic", "--n", "1", "--grade", "2", "--out", "x.json"],
        ["build", "--input", "missing.json", "--structure", "palin", "--ell", "1"],
        ["recover", "--lification", "missing.json", "--ell", "1"],
        ["refute-quartic", "--structure", "even", "--grid", "0"],
    ]
)
def test_usage_errors_exit_with_two(config, argv):
    assert main(argv, config=config) == 2


def test_grade_error_exits_with_two(config, cubic, capsys):
    assert run(config, "build", "--input", cubic, "--structure", "palin", "--ell", 2) == 2
    assert "GradeNotOddMultiple" in capsys.readouterr().out


def test_unknown_plan_exits_with_two(config, cubic, capsys):
    assert run(config, "build", "--input", cubic, "--structure", "palin", "--ell", 1, "--plan", "nowhere") == 2
    assert "Unknown plan: nowhere" in capsys.readouterr().out


def test_recover_with_wrong_block_size_exits_with_one(config, cubic, tmp_path):
    lif = tmp_path / "L.json"
    run(config, "build", "--input", cubic, "--structure", "palin", "--ell", 1, "--out", lif)
    assert run(config, "recover", "--lification", lif, "--ell", 1, "--structure", "palin", "--n", 3) == 1


# ------------------------------------------------------------
# TEST: Help
# ------------------------------------------------------------
def test_help_exits_with_zero(config, capsys):
    assert main(["--help"], config=config) == 0
    assert "refute-quartic" in capsys.readouterr().out


def test_help_lists_plans_and_demos():
    assert plan_help().startswith("placement plans:")
    assert "sparse-example" in plan_help()
    assert "invmatrices" in demo_help()


def test_star_flavor_is_case_insensitive():
    args = build_parser().parse_args(["random", "--structure", "palin", "--star", "H", "--n", "1",
                                      "--grade", "2", "--out", "x.json"])
    assert args.star == "h"
