########################
# Command Module       #
########################
"""
This module implements the Command design pattern for the workbench: every
CLI subcommand is a command object that validates its inputs on creation
and runs against a LificationWorkbench.

Key Features:

1. Command Interface:
   - Command.execute(receiver) returns a CommandResult carrying the exit
     code, styled messages and the produced object

2. Concrete Commands:
   - build, sparse, verify, recover, refute-quartic, demo, history, random
   - File inputs and outputs use the JSON formats of app.serialization
   - Reports record the seed of the run

3. Factory:
   - CommandFactory.create_command(name, **options) with dynamic
     registration; unknown names raise ValueError

4. Exit Codes:
   - 0 on success or a certificate that holds
   - 1 when a certificate does not hold
   - errors propagate to the CLI, which maps them to 1 or 2
"""

from __future__ import annotations

from abc import ABC, abstractmethod
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Dict, List, Optional, Tuple

from app.conditions import PlacementPlan
from app.exceptions import ValidationError
from app.input_validators import InputValidator
from app.matpoly import MatrixPolynomial
from app.serialization import (
    polynomial_to_dict,
    read_lification,
    read_plan,
    read_polynomial,
    write_lification,
    write_polynomial,
    write_report,
)
from app.structures import StructureTag

EXIT_OK = 0
EXIT_FAILED = 1
EXIT_USAGE = 2


@dataclass
class CommandResult:
    """
    What a command produced.

    Attributes:
        exit_code: Process exit code.
        messages: (style, text) pairs; style is a ColorFormatter method name.
        payload: The main object built (lification, report, outcome, ...).
    """
    exit_code: int = EXIT_OK
    messages: List[Tuple[str, str]] = field(default_factory=list)
    payload: Any = None

    def say(self, style: str, text: str) -> "CommandResult":
        self.messages.append((style, text))
        return self


class Command(ABC):
    """
    Abstract Command interface.

    Concrete commands validate their options in __init__ and implement
    execute() against a workbench.
    """

    NAME = ""
    seed: Optional[int] = None

    @abstractmethod
    def execute(self, receiver: Any) -> CommandResult:
        """
        Execute the command against the given receiver.

        Args:
            receiver (Any): A LificationWorkbench.

        Returns:
            CommandResult: Exit code, messages and payload.
        """
        raise NotImplementedError()  # pragma: no cover - abstract method

    def run_seed(self, receiver: Any) -> int:
        """The seed of this run: the --seed option, else the configured seed."""
        return receiver.config.seed if self.seed is None else self.seed

    def __str__(self) -> str:
        return self.NAME


def _optional_path(value: Optional[Any]) -> Optional[Path]:
    return None if value is None else Path(value)


def _plan_option(plan: Optional[str]) -> Any:
    """A registered plan name, or a PlacementPlan read from a .json file."""
    if plan is None:
        return None
    if plan.lower().endswith(".json"):
        return read_plan(InputValidator.validate_input_file(plan))
    return plan


class BuildCommand(Command):
    """Build a structured ℓ-ification of a polynomial file."""

    NAME = "build"

    def __init__(self, input: Any, structure: str, ell: Any, star: Optional[str] = None,
                 plan: Optional[str] = None, out: Optional[Any] = None, pretty: bool = False,
                 strict: bool = False, **_: Any):
        self.input = InputValidator.validate_input_file(input)
        self.structure: StructureTag = InputValidator.validate_structure(structure, star)
        self.ell = InputValidator.validate_positive_int(ell, "ell")
        self.plan = _plan_option(plan)
        self.out = _optional_path(out)
        self.pretty = pretty
        self.strict = strict

    def _run(self, receiver: Any):
        P = read_polynomial(self.input, receiver.config)
        return P, receiver.build(P, self.structure, self.ell, self.plan, self.strict, command=self.NAME)

    def execute(self, receiver: Any) -> CommandResult:
        P, result = self._run(receiver)
        out = CommandResult(payload=result)
        plan_name = self.plan.name if isinstance(self.plan, PlacementPlan) else result.plan_name
        out.say("success", f"Built {self.structure} {self.ell}-ification of a grade-{P.grade} "
                           f"{P.rows}x{P.cols} polynomial: size {result.size}, {result.census()} nonzero blocks "
                           f"(plan {plan_name or '<unnamed>'}, condition {result.condition.value})")
        if self.out is not None:
            write_lification(self.out, result.L, receiver.config)
            out.say("info", f"Wrote {self.out}")
        if self.pretty:
            out.say("result", result.L.render())
        return out


class SparseCommand(BuildCommand):
    """Build with a sparse plan and compare the block count against the bounds."""

    NAME = "sparse"

    def __init__(self, input: Any, structure: str, ell: Any, star: Optional[str] = None,
                 plan: Optional[str] = "sparse", out: Optional[Any] = None, pretty: bool = False,
                 strict: bool = False, **_: Any):
        super().__init__(input, structure, ell, star, plan or "sparse", out, pretty, strict)

    def execute(self, receiver: Any) -> CommandResult:
        P = read_polynomial(self.input, receiver.config)
        result, report = receiver.sparse(P, self.structure, self.ell, self.plan)
        out = CommandResult(payload=(result, report))
        out.say("success" if report.meets_floor else "warning",
                f"{self.structure} ℓ={self.ell}, d={report.d}: {report.describe()}")
        if self.out is not None:
            write_lification(self.out, result.L, receiver.config)
            out.say("info", f"Wrote {self.out}")
        if self.pretty:
            out.say("result", result.L.render())
        return out


class VerifyCommand(Command):
    """Certify that a lification file is a strong ℓ-ification of a polynomial file."""

    NAME = "verify"

    def __init__(self, lification: Any, poly: Any, ell: Any, report: Optional[Any] = None,
                 structure: Optional[str] = None, star: Optional[str] = None, seed: Optional[int] = None,
                 **_: Any):
        self.lification = InputValidator.validate_input_file(lification)
        self.poly = InputValidator.validate_input_file(poly)
        self.ell = InputValidator.validate_positive_int(ell, "ell")
        self.report = _optional_path(report)
        self.structures = [InputValidator.validate_structure(structure, star)] if structure else []
        self.seed = seed

    def execute(self, receiver: Any) -> CommandResult:
        L = read_lification(self.lification, receiver.config)
        P = read_polynomial(self.poly, receiver.config)
        report = receiver.verify(L, P, self.ell, self.structures)
        holds = report.is_lification and report.is_strong
        out = CommandResult(EXIT_OK if holds else EXIT_FAILED, payload=report)
        out.say("success" if report.is_lification else "error", f"ℓ-ification: {'yes' if report.is_lification else 'no'}")
        out.say("success" if report.is_strong else "error", f"strong: {'yes' if report.is_strong else 'no'}")
        if report.det_ratio is not None:
            out.say("info", f"det L / det P = {report.det_ratio}")
        if report.right_indices_L is not None:
            out.say("info", f"right minimal indices: P {report.right_indices_P} -> L {report.right_indices_L}")
            out.say("info", f"left minimal indices: P {report.left_indices_P} -> L {report.left_indices_L}")
        for tag, ok in report.structure_checks.items():
            out.say("success" if ok else "error", f"{tag}: {'yes' if ok else 'no'}")
        if self.report is not None:
            write_report(self.report, report.to_dict(), self.run_seed(receiver), receiver.config)
            out.say("info", f"Wrote {self.report}")
        return out


class RecoverCommand(Command):
    """Recover P from a block-Kronecker lification file."""

    NAME = "recover"

    def __init__(self, lification: Any, ell: Any, structure: Optional[str] = None, star: Optional[str] = None,
                 mobius: Optional[str] = None, sign: Any = 1, n: Optional[Any] = None, out: Optional[Any] = None,
                 poly: Optional[Any] = None, **_: Any):
        self.lification = InputValidator.validate_input_file(lification)
        self.ell = InputValidator.validate_positive_int(ell, "ell")
        self.structure = InputValidator.validate_structure(structure, star) if structure else None
        self.mobius = InputValidator.validate_mobius(mobius) if mobius else None
        if self.structure is None and self.mobius is None:
            raise ValidationError("recover needs a structure or a Möbius matrix")
        self.sign = InputValidator.validate_sign(sign)
        self.n = InputValidator.validate_positive_int(n, "n") if n is not None else None
        self.out = _optional_path(out)
        self.poly = InputValidator.validate_input_file(poly) if poly is not None else None

    def execute(self, receiver: Any) -> CommandResult:
        L = read_lification(self.lification, receiver.config)
        n = self.n or L.n
        recovery = receiver.recover(L, self.structure, self.ell, n, self.mobius,
                                    self.sign if self.mobius is not None else 1)
        P: MatrixPolynomial = recovery.polynomial
        out = CommandResult(payload=recovery)
        out.say("success", f"Recovered a grade-{P.grade} {P.rows}x{P.cols} polynomial"
                           f"{' (product was -P)' if recovery.negated else ''}")
        if self.poly is not None:
            expected = read_polynomial(self.poly, receiver.config)
            if expected.same_values(P):
                out.say("success", f"matches {self.poly}")
            else:
                out.exit_code = EXIT_FAILED
                out.say("error", f"does not match {self.poly}")
        if self.out is not None:
            write_polynomial(self.out, P, receiver.config)
            out.say("info", f"Wrote {self.out}")
        else:
            out.say("result", str(polynomial_to_dict(P)["coeffs"]))
        return out


class RefuteQuarticCommand(Command):
    """Search the structured scalar quartic companion templates."""

    NAME = "refute-quartic"

    def __init__(self, structure: str, star: Optional[str] = None, grid: Optional[str] = None,
                 allow_products: bool = False, report: Optional[Any] = None, shuffle_seed: Optional[int] = None,
                 partition: Optional[str] = None, seed: Optional[int] = None, **_: Any):
        self.structure = InputValidator.validate_structure(structure, star)
        self.grid = InputValidator.validate_grid(grid) if grid is not None else None
        self.allow_products = allow_products
        self.report = _optional_path(report)
        self.shuffle_seed = shuffle_seed
        self.partition = InputValidator.validate_partition(partition) if partition else (0, 1)
        self.seed = seed

    def execute(self, receiver: Any) -> CommandResult:
        report = receiver.refute(self.structure, self.grid, self.allow_products, self.shuffle_seed, self.partition)
        out = CommandResult(payload=report)
        out.say("info", f"{self.structure}, grid {{{', '.join(report.grid)}}}"
                        f"{', products allowed' if self.allow_products else ''}")
        if report.degenerate:
            out.say("warning", f"{self.structure} scalar quartics are identically zero; nothing to search")
        elif report.satisfying_count == 0:
            out.say("success", f"{report.templates_tested} templates tested, none satisfies det L = αp")
        else:
            style = "result" if self.allow_products else "warning"
            out.say(style, f"{report.templates_tested} templates tested, {report.satisfying_count} satisfy det L = αp")
            for witness in report.witnesses[:5]:
                out.say("result", f"  {witness.render()}")
        if self.report is not None:
            write_report(self.report, report.to_dict(), self.run_seed(receiver), receiver.config)
            out.say("info", f"Wrote {self.report}")
        return out


class DemoCommand(Command):
    """Run a named demo scenario."""

    NAME = "demo"

    def __init__(self, name: str, seed: Optional[int] = None, report: Optional[Any] = None, **_: Any):
        self.name = name
        self.seed = seed
        self.report = _optional_path(report)

    def execute(self, receiver: Any) -> CommandResult:
        outcome = receiver.demo(self.name, self.seed)
        out = CommandResult(EXIT_OK if outcome.passed else EXIT_FAILED, payload=outcome)
        out.say("heading", outcome.title)
        for caption, layout in outcome.renders:
            out.say("info", f"{caption} ({outcome.census.get(caption, '?')} nonzero blocks):")
            out.say("result", layout)
        for claim, held in outcome.checks.items():
            out.say("success" if held else "error", f"{'✓' if held else '✗'} {claim}")
        if self.report is not None:
            write_report(self.report, outcome.to_dict(), self.run_seed(receiver), receiver.config)
            out.say("info", f"Wrote {self.report}")
        return out


class HistoryCommand(Command):
    """Show or clear the run history."""

    NAME = "history"

    def __init__(self, clear: bool = False, **_: Any):
        self.clear = clear

    def execute(self, receiver: Any) -> CommandResult:
        out = CommandResult()
        if self.clear:
            receiver.clear_history()
            receiver.save_history()
            return out.say("success", "History cleared")
        df = receiver.get_history_dataframe()
        out.payload = df
        if df.empty:
            return out.say("info", "No runs recorded")
        return out.say("result", df.to_string(index=False))


class RandomCommand(Command):
    """Write a seeded random structured polynomial to a JSON file."""

    NAME = "random"

    def __init__(self, structure: str, n: Any, grade: Any, out: Any, star: Optional[str] = None,
                 field: Optional[str] = None, seed: Optional[int] = None, **_: Any):
        self.structure = InputValidator.validate_structure(structure, star)
        self.n = InputValidator.validate_positive_int(n, "n")
        self.grade = InputValidator.validate_positive_int(grade, "grade")
        self.out = Path(out)
        self.field = InputValidator.validate_backend(field) if field else None
        self.seed = seed

    def execute(self, receiver: Any) -> CommandResult:
        P = receiver.random_polynomial(self.structure, self.n, self.grade, self.field, self.seed)
        write_polynomial(self.out, P, receiver.config)
        seed = self.run_seed(receiver)
        return CommandResult(payload=P).say(
            "success", f"Wrote a random {self.structure} {self.n}x{self.n} polynomial of grade {self.grade} "
                       f"to {self.out} (seed {seed})")


class CommandFactory:
    """
    Factory class for creating commands by subcommand name.
    """

    _commands: Dict[str, type] = {
        'build': BuildCommand,
        'sparse': SparseCommand,
        'verify': VerifyCommand,
        'recover': RecoverCommand,
        'refute-quartic': RefuteQuarticCommand,
        'demo': DemoCommand,
        'history': HistoryCommand,
        'random': RandomCommand,
    }

    @classmethod
    def register_command(cls, name: str, command_class: type) -> None:
        """
        Register a new command.

        Raises:
            TypeError: If command_class does not inherit from Command.
        """
        if not issubclass(command_class, Command):
            raise TypeError("Command class must inherit from Command")
        cls._commands[name.lower()] = command_class

    @classmethod
    def create_command(cls, name: str, /, **options: Any) -> Command:
        """
        Create a command from its subcommand name and options.

        Raises:
            ValueError: If the name is unknown.
            ValidationError: If an option is invalid.
        """
        command_class = cls._commands.get(name.lower())
        if not command_class:
            raise ValueError(f"Unknown command: {name}")
        return command_class(**options)

    @classmethod
    def names(cls) -> List[str]:
        return list(cls._commands)
