########################
# Workbench Facade     #
########################

"""
This module implements LificationWorkbench, the facade the command-line
front end talks to. It runs the library operations, records every run and
manages the run history.

Key Features:
1. Operations:
   - build / sparse: structured block-Kronecker lifications
   - verify: strongness certificates
   - recover: the triple product N_2 M N_1^T
   - refute: the quartic companion template search
   - random_polynomial / demo: seeded instances and worked examples

2. Run History:
   - One RunRecord per run, bounded by max_history_size
   - CSV persistence with pandas, with column validation on load
   - DataFrame view for the `history` subcommand

3. Observer Integration:
   - Registers, removes and notifies RunObservers after every run

4. Configuration & Logging:
   - Reads LificationConfig, validates it and sets up file logging
   - Creates the history directory
"""

import logging
from typing import List, Optional, Sequence, Tuple, Union

import numpy as np
import pandas as pd

from app.block_polynomial import BlockPolynomial
from app.commands import Command
from app.conditions import PlacementPlan, split_grade
from app.demos import DemoOutcome, run_demo
from app.engine import LificationResult, Recovery, build_structured, default_plan, recover_P
from app.exceptions import LificationError, OperationError
from app.generators import random_structured
from app.history import RunObserver
from app.lification_config import LificationConfig
from app.logger import configure_logging
from app.matpoly import MatrixPolynomial
from app.mobius import MobiusMatrix
from app.quartic_refuter import RefutationReport, refute
from app.run_record import RECORD_COLUMNS, RunRecord
from app.scalar import Backend
from app.structures import StructureTag
from app.verification import SparsityReport, VerificationReport, certify_lification, sparsity_census

PlanLike = Union[str, PlacementPlan, None]


class LificationWorkbench:
    """
    Facade over the library for the command-line front end.

    Attributes:
        config: Active configuration.
        history: Run records, oldest first.
        observers: Objects notified after every run.
    """

    def __init__(self, config: Optional[LificationConfig] = None, load: bool = True):
        """
        Initialize the workbench.

        Args:
            config (Optional[LificationConfig]): Settings; loaded from the
                environment when omitted.
            load (bool): Read the existing history file.
        """
        self.config = config or LificationConfig()
        self.config.validate()
        configure_logging(self.config)
        self.history: List[RunRecord] = []
        self.observers: List[RunObserver] = []
        self.config.history_dir.mkdir(parents=True, exist_ok=True)
        if load:
            try:
                self.load_history()
            except Exception as e:
                logging.warning(f"Could not load existing history: {e}")
        logging.info("Workbench initialized with configuration")

    # ------------------------------------------------------------------
    # Observers
    # ------------------------------------------------------------------

    def add_observer(self, observer: RunObserver) -> None:
        self.observers.append(observer)
        logging.info(f"Added observer: {observer.__class__.__name__}")

    def remove_observer(self, observer: RunObserver) -> None:
        self.observers.remove(observer)
        logging.info(f"Removed observer: {observer.__class__.__name__}")

    def notify_observers(self, record: RunRecord) -> None:
        for observer in self.observers:
            observer.update(record)

    def record(self, record: RunRecord) -> RunRecord:
        """Append a run record, trim the history and notify observers."""
        self.history.append(record)
        if len(self.history) > self.config.max_history_size:
            self.history.pop(0)
        self.notify_observers(record)
        return record

    def execute_command(self, command: Command):
        """Run a Command against this workbench and return its result."""
        return command.execute(self)

    # ------------------------------------------------------------------
    # Operations
    # ------------------------------------------------------------------

    def _plan(self, plan: PlanLike, structure: StructureTag, d: int, ell: int) -> PlacementPlan:
        if isinstance(plan, PlacementPlan):
            return plan
        return default_plan(structure, d, ell, plan or "stacked")

    def _failed(self, command: str, error: Exception, **fields) -> None:
        logging.error(f"{command} failed: {error}")
        self.record(RunRecord(command, outcome="error", detail=f"{type(error).__name__}: {error}", **fields))

    def build(self, P: MatrixPolynomial, structure: StructureTag, ell: int, plan: PlanLike = None,
              strict: bool = False, command: str = "build") -> LificationResult:
        """
        Structured ℓ-ification of P with the named or given plan.

        Raises:
            LificationError: Whatever the engine raises; the run is recorded first.
        """
        fields = dict(structure=str(structure), ell=ell, k=P.grade, n=P.rows)
        try:
            d = split_grade(P.grade, ell)
            chosen = self._plan(plan, structure, d, ell)
            result = build_structured(P, structure, ell, chosen, strict)
        except (LificationError, ValueError) as e:
            self._failed(command, e, **fields)
            raise
        self.record(RunRecord(command, d=result.d, census=result.census(),
                              detail=f"plan {result.plan_name or '<unnamed>'}, size {result.size}", **fields))
        return result

    def sparse(self, P: MatrixPolynomial, structure: StructureTag, ell: int,
               plan: PlanLike = "sparse") -> Tuple[LificationResult, SparsityReport]:
        """
        Build with a sparse plan and count its nonzero blocks.

        Returns:
            (LificationResult, SparsityReport)
        """
        result = self.build(P, structure, ell, plan, command="sparse")
        report = sparsity_census(result.L, result.d, ell, result.condition)
        return result, report

    def verify(self, L: Union[BlockPolynomial, MatrixPolynomial], P: MatrixPolynomial, ell: int,
               structures: Sequence[StructureTag] = ()) -> VerificationReport:
        """Certify L against P; a certificate that does not hold is recorded as "failed"."""
        base = L.base if isinstance(L, BlockPolynomial) else L
        fields = dict(ell=ell, k=P.grade, n=P.rows)
        try:
            report = certify_lification(L, P, ell, size_cap=self.config.smith_size_cap, structures=structures)
        except LificationError as e:
            self._failed("verify", e, **fields)
            raise
        outcome = "ok" if report.is_lification and report.is_strong else "failed"
        self.record(RunRecord("verify", outcome=outcome, census=report.block_census,
                              detail=f"L {base.rows}x{base.cols}, lification={report.is_lification}, "
                                     f"strong={report.is_strong}", **fields))
        return report

    def recover(self, L: Union[BlockPolynomial, MatrixPolynomial], structure: Optional[StructureTag],
                ell: int, n: int, mobius: Optional[MobiusMatrix] = None, sign: int = 1) -> Recovery:
        """
        Recover P from a block-Kronecker L of grade ℓ with n×n blocks.

        The Möbius matrix and sign come from the structure unless given.
        """
        base = L.base if isinstance(L, BlockPolynomial) else L
        fields = dict(structure=str(structure or ""), ell=ell, n=n)
        try:
            if base.rows % n or (base.rows // n) % 2 == 0:
                raise OperationError(f"A {base.rows}x{base.cols} polynomial has no odd number of {n}x{n} block rows")
            d = (base.rows // n - 1) // 2
            if mobius is None:
                if structure is None:
                    raise OperationError("Recovery needs a structure or a Möbius matrix")
                mobius, sign = structure.mobius_matrix(base.backend), structure.sign
            recovery = recover_P(base, mobius, sign, d, ell, n)
        except LificationError as e:
            self._failed("recover", e, **fields)
            raise
        self.record(RunRecord("recover", d=d, k=(2 * d + 1) * ell,
                              detail=f"recovered grade {recovery.polynomial.grade}", **fields))
        return recovery

    def refute(self, structure: StructureTag, grid: Optional[Sequence] = None, allow_products: bool = False,
               shuffle_seed: Optional[int] = None, partition=(0, 1)) -> RefutationReport:
        """Search the quartic companion templates; the configured grid is used when none is given."""
        grid = list(grid) if grid is not None else self.config.grid
        try:
            report = refute(structure, grid, allow_products, shuffle_seed, tuple(partition))
        except LificationError as e:
            self._failed("refute-quartic", e, structure=str(structure), ell=2, k=4, n=1)
            raise
        self.record(RunRecord("refute-quartic", structure=str(structure), ell=2, d=0, k=4, n=1,
                              detail=f"{report.templates_tested} templates, {report.satisfying_count} satisfying"
                                     f"{' (products allowed)' if allow_products else ''}"))
        return report

    def random_polynomial(self, structure: StructureTag, n: int, grade: int, backend: Optional[Backend] = None,
                          seed: Optional[int] = None, bound: int = 5) -> MatrixPolynomial:
        """Seeded random structured polynomial; the configured seed and field are the defaults."""
        seed = self.config.seed if seed is None else seed
        backend = Backend(backend or self.config.field)
        P = random_structured(np.random.default_rng(seed), structure, n, grade, backend, bound)
        self.record(RunRecord("random", structure=str(structure), k=grade, n=n, detail=f"seed {seed}"))
        return P

    def demo(self, name: str, seed: Optional[int] = None) -> DemoOutcome:
        seed = self.config.seed if seed is None else seed
        try:
            outcome = run_demo(name, seed, self.config.smith_size_cap)
        except (LificationError, ValueError) as e:
            self._failed("demo", e)
            raise
        failed = [claim for claim, held in outcome.checks.items() if not held]
        self.record(RunRecord("demo", outcome="ok" if outcome.passed else "failed",
                              detail=f"{name}, seed {seed}" + (f", failed: {'; '.join(failed)}" if failed else "")))
        return outcome

    # ------------------------------------------------------------------
    # History persistence
    # ------------------------------------------------------------------

    def get_history_dataframe(self) -> pd.DataFrame:
        return pd.DataFrame([r.to_dict() for r in self.history], columns=list(RECORD_COLUMNS))

    def save_history(self) -> None:
        """
        Save the run history to CSV using pandas.

        Raises:
            OperationError: If saving fails.
        """
        try:
            self.config.history_dir.mkdir(parents=True, exist_ok=True)
            self.get_history_dataframe().to_csv(self.config.history_file, index=False,
                                                encoding=self.config.default_encoding)
            logging.info(f"History saved successfully to {self.config.history_file}")
        except Exception as e:
            logging.error(f"Failed to save history: {e}")
            raise OperationError(f"Failed to save history: {e}")

    def load_history(self) -> None:
        """
        Load the run history from CSV using pandas.

        Raises:
            OperationError: If the file is malformed or lacks required columns.
        """
        path = self.config.history_file
        try:
            if not path.exists():
                logging.info("No history file found - starting with empty history")
                return
            df = pd.read_csv(path, dtype=str, keep_default_na=False, encoding=self.config.default_encoding)
            missing = set(RECORD_COLUMNS) - set(df.columns)
            if missing:
                raise OperationError(f"Missing required columns in history file: {sorted(missing)}")
            self.history = [RunRecord.from_dict(row.to_dict()) for _, row in df.iterrows()]
            self.history = self.history[-self.config.max_history_size:]
            logging.info(f"Loaded {len(self.history)} run records from history")
        except pd.errors.EmptyDataError:
            logging.warning("Empty or invalid CSV file")
            raise OperationError(f"{path}: history file is empty or corrupted")
        except pd.errors.ParserError as e:
            logging.error(f"Malformed CSV file: {e}")
            raise OperationError(f"{path}: malformed CSV file: {e}")
        except OperationError:
            raise
        except Exception as e:
            logging.error(f"Failed to load history: {e}")
            raise OperationError(f"{path}: failed to load history: {e}")

    def show_history(self) -> List[str]:
        return [str(r) for r in self.history]

    def clear_history(self) -> None:
        self.history.clear()
        logging.info("History cleared")
