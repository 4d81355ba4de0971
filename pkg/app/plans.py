########################
# Placement Strategies #
########################

"""
This module defines the placement strategies that produce PlacementPlans
for the top-left block M, and the PlanFactory that creates them by name,
following the Strategy and Factory design patterns.

Key Features:
1. PlanStrategy Base Class:
   - make_plan(structure, d, ℓ) returns a PlacementPlan
   - supports(structure, d, ℓ) tells whether the strategy applies
   - DESCRIPTION feeds the CLI help text

2. Concrete Strategies:
   - stacked: one staircase block per group, dense
   - sparse: diagonal or antidiagonal for ℓ = 1, one block per group with a
     support closed under transposition for palindromic ℓ > 1, staircase
     for symmetric and alternating ℓ > 1
   - search: the support found by sparse_support_search
   - examduplic, sparse-example, cubification: the fixed placements of the
     worked grade-10, grade-14 and grade-21 examples

3. Factory Pattern:
   - PlanFactory.create_plan_strategy(name) with dynamic registration
   - builtin_plans(structure, d, ℓ) lists every applicable plan

4. Support Search:
   - sparse_support_search() enumerates admissible supports exhaustively and
     returns the one with the fewest nonzero blocks after symmetrization
"""

from abc import ABC, abstractmethod
from dataclasses import dataclass
from itertools import product
import logging
from typing import Callable, Dict, List, Optional, Sequence, Tuple

from app.conditions import PlacementPlan, cells_on_group, row_sign
from app.exceptions import IncompletePlan
from app.structures import ConditionKind, StructureKind, StructureTag

Cell = Tuple[int, int]
# (r, has_low, has_high) -> True to place P_{ℓr} at power 0 of group r
LowRule = Callable[[int, bool, bool], bool]


def plan_from_cells(kind: ConditionKind, d: int, ell: int, cells: Dict[int, Cell],
                    prefer_low: LowRule, name: str) -> PlacementPlan:
    """
    Turn one chosen block per group into a full plan.

    Coefficients P_{ℓr+c} with c ≠ 0 go to the block of group r at power c;
    P_{ℓr} goes to power 0 of group r or power ℓ of group r-1 as prefer_low
    decides among the available options.

    Raises:
        IncompletePlan: If some coefficient has no block to go to.
    """
    plan = PlacementPlan(kind, d, ell, name=name)
    k = (2 * d + 1) * ell
    for j in range(k + 1):
        r, c = divmod(j, ell)
        if c:
            if r not in cells:
                raise IncompletePlan(f"Group {r} has no block for P_{j}")
            s, t = cells[r]
            plan.place(j, s, t, c, row_sign(kind, d, s))
            continue
        has_low = r <= 2 * d and r in cells
        has_high = r >= 1 and (r - 1) in cells
        if not has_low and not has_high:
            raise IncompletePlan(f"No block can carry P_{j}")
        if has_low and (not has_high or prefer_low(r, has_low, has_high)):
            s, t = cells[r]
            plan.place(j, s, t, 0, row_sign(kind, d, s))
        else:
            s, t = cells[r - 1]
            plan.place(j, s, t, ell, row_sign(kind, d, s))
    return plan


def staircase_cell(d: int, q: int) -> Cell:
    """Diagonal block for even anti-diagonals, the block right of it for odd ones."""
    if q % 2 == 0:
        s = d + 1 - q // 2
        return s, s
    s = d - (q - 1) // 2
    return s, s + 1


def first_row_column_cell(d: int, q: int) -> Cell:
    """DS group q in the first row (q ≤ d) or first column (q > d)."""
    if q <= d:
        return 1, 1 + d - q
    return 1 + q - d, 1


def last_row_column_cell(d: int, q: int) -> Cell:
    """DS group q in the last column (q ≤ d) or last row (q > d)."""
    if q <= d:
        return q + 1, d + 1
    return d + 1, 2 * d + 1 - q


class PlanStrategy(ABC):
    """
    Abstract base class for placement strategies.
    """

    DESCRIPTION = ""

    def supports(self, structure: StructureTag, d: int, ell: int) -> bool:
        """Whether this strategy produces a plan for these parameters."""
        return True

    @abstractmethod
    def make_plan(self, structure: StructureTag, d: int, ell: int) -> PlacementPlan:
        """
        Build the plan.

        Raises:
            IncompletePlan: If the strategy does not apply.
        """
        pass  # pragma: no cover

    def __str__(self) -> str:
        return self.__class__.__name__


class StackedPlan(PlanStrategy):
    DESCRIPTION = "Dense staircase: one block per group, high powers stacked at the top"

    def make_plan(self, structure: StructureTag, d: int, ell: int) -> PlacementPlan:
        kind = structure.condition(ell)
        if kind is ConditionKind.DS:
            cells = {q: last_row_column_cell(d, q) for q in range(2 * d + 1)}
        else:
            cells = {q: staircase_cell(d, q) for q in range(2 * d + 1)}
        return plan_from_cells(kind, d, ell, cells, lambda r, lo, hi: r < 2 * d, "stacked")


class SparsePlan(PlanStrategy):
    DESCRIPTION = "Few nonzero blocks: (anti)diagonal for ℓ=1, transposition-closed support for ℓ>1"

    def make_plan(self, structure: StructureTag, d: int, ell: int) -> PlacementPlan:
        kind = structure.condition(ell)
        if ell == 1:
            if kind is ConditionKind.DS:
                cells = {2 * s - 2: (s, d + 2 - s) for s in range(1, d + 2)}
            else:
                cells = {2 * (d + 1 - s): (s, s) for s in range(1, d + 2)}
        elif kind is ConditionKind.DS:
            cells = {q: first_row_column_cell(d, q) for q in range(2 * d + 1)}
        else:
            cells = {q: staircase_cell(d, q) for q in range(2 * d + 1)}
        return plan_from_cells(kind, d, ell, cells, lambda r, lo, hi: True, "sparse")


class SearchPlan(PlanStrategy):
    DESCRIPTION = "Exhaustive search for the support with the fewest blocks after symmetrization"

    def make_plan(self, structure: StructureTag, d: int, ell: int) -> PlacementPlan:
        return sparse_support_search(structure, d, ell).plan


class ExplicitPlan(PlanStrategy):
    """A fixed list of (j, s, t, power) placements for one (d, ℓ) and set of conditions."""

    D = 0
    ELL = 1
    NAME = ""
    PLACEMENTS: Dict[ConditionKind, Sequence[Tuple[int, int, int, int]]] = {}

    def supports(self, structure: StructureTag, d: int, ell: int) -> bool:
        return d == self.D and ell == self.ELL and structure.condition(ell) in self.PLACEMENTS

    def make_plan(self, structure: StructureTag, d: int, ell: int) -> PlacementPlan:
        if not self.supports(structure, d, ell):
            raise IncompletePlan(f"Plan {self.NAME} is only defined for d={self.D}, ℓ={self.ELL}")
        kind = structure.condition(ell)
        plan = PlacementPlan(kind, d, ell, name=self.NAME)
        for j, s, t, power in self.PLACEMENTS[kind]:
            plan.place(j, s, t, power, row_sign(kind, d, s))
        return plan


def _block_entries(cells: Dict[Cell, Sequence[Tuple[int, int]]]) -> List[Tuple[int, int, int, int]]:
    """{(s, t): [(power, j), ...]} -> [(j, s, t, power), ...]"""
    return [(j, s, t, power) for (s, t), items in cells.items() for power, j in items]


class ExamDuplicPlan(ExplicitPlan):
    DESCRIPTION = "Grade-10 worked example (d=2, ℓ=2) for symmetric, alternating and palindromic P"
    D, ELL, NAME = 2, 2, "examduplic"
    PLACEMENTS = {
        ConditionKind.AS: _block_entries({
            (1, 1): [(1, 9), (2, 10)],
            (1, 2): [(0, 6), (1, 7), (2, 8)],
            (2, 2): [(0, 4), (1, 5)],
            (2, 3): [(0, 2), (1, 3)],
            (3, 3): [(0, 0), (1, 1)],
        }),
        ConditionKind.DS: _block_entries({
            (1, 1): [(0, 4), (1, 5), (2, 6)],
            (1, 3): [(0, 0), (1, 1), (2, 2)],
            (2, 1): [(1, 7)],
            (2, 3): [(1, 3)],
            (3, 1): [(0, 8), (1, 9), (2, 10)],
        }),
    }


class ExamDuplicAlternatingPlan(ExplicitPlan):
    DESCRIPTION = "Grade-10 worked example placement used for ⋆-odd P (d=2, ℓ=2)"
    D, ELL, NAME = 2, 2, "examduplic-alternating"
    PLACEMENTS = {
        ConditionKind.AS: _block_entries({
            (1, 1): [(0, 8), (1, 9), (2, 10)],
            (1, 3): [(0, 4)],
            (2, 1): [(0, 6), (1, 7)],
            (2, 2): [(1, 5)],
            (3, 2): [(1, 3)],
            (3, 3): [(0, 0), (1, 1), (2, 2)],
        }),
    }

    def supports(self, structure: StructureTag, d: int, ell: int) -> bool:
        return super().supports(structure, d, ell) and structure.kind in (StructureKind.EVEN, StructureKind.ODD)


class SparseExamplePlan(ExplicitPlan):
    DESCRIPTION = "Grade-14 worked example (d=3, ℓ=2) for palindromic P"
    D, ELL, NAME = 3, 2, "sparse-example"
    PLACEMENTS = {
        ConditionKind.DS: _block_entries({
            (1, 2): [(1, 5), (2, 6)],
            (1, 4): [(0, 0), (1, 1), (2, 2)],
            (2, 1): [(0, 8), (1, 9)],
            (2, 4): [(1, 3), (2, 4)],
            (3, 3): [(1, 7)],
            (4, 1): [(1, 13), (2, 14)],
            (4, 2): [(0, 10), (1, 11), (2, 12)],
        }),
    }


class CubificationPlan(ExplicitPlan):
    DESCRIPTION = "Grade-21 worked example (d=3, ℓ=3) for symmetric P"
    D, ELL, NAME = 3, 3, "cubification"
    PLACEMENTS = {
        ConditionKind.AS: _block_entries({
            (1, 1): [(0, 18), (1, 19), (2, 20), (3, 21)],
            (1, 4): [(0, 9), (1, 10), (2, 11), (3, 12)],
            (2, 1): [(0, 15), (1, 16), (2, 17)],
            (2, 2): [(1, 13), (2, 14)],
            (3, 3): [(0, 6), (1, 7), (2, 8)],
            (3, 4): [(0, 3), (1, 4), (2, 5)],
            (4, 4): [(0, 0), (1, 1), (2, 2)],
        }),
    }

    def supports(self, structure: StructureTag, d: int, ell: int) -> bool:
        return super().supports(structure, d, ell) and structure.kind in (StructureKind.SYMMETRIC,
                                                                          StructureKind.SKEW)


class PlanFactory:
    """
    Factory class for creating placement strategies by name.
    """

    _strategies: Dict[str, type] = {
        'stacked': StackedPlan,
        'sparse': SparsePlan,
        'search': SearchPlan,
        'examduplic': ExamDuplicPlan,
        'examduplic-alternating': ExamDuplicAlternatingPlan,
        'sparse-example': SparseExamplePlan,
        'cubification': CubificationPlan,
    }

    @classmethod
    def register_plan_strategy(cls, name: str, strategy_class: type) -> None:
        """
        Register a new strategy.

        Raises:
            TypeError: If strategy_class does not inherit from PlanStrategy.
        """
        if not issubclass(strategy_class, PlanStrategy):
            raise TypeError("Plan strategy class must inherit from PlanStrategy")
        cls._strategies[name.lower()] = strategy_class

    @classmethod
    def create_plan_strategy(cls, name: str) -> PlanStrategy:
        """
        Raises:
            ValueError: If the name is unknown.
        """
        strategy_class = cls._strategies.get(name.lower())
        if not strategy_class:
            raise ValueError(f"Unknown plan: {name}")
        return strategy_class()

    @classmethod
    def names(cls) -> List[str]:
        return list(cls._strategies)


def builtin_plans(structure: StructureTag, d: int, ell: int,
                  include_search: bool = False) -> List[PlacementPlan]:
    """Every registered plan that applies to (structure, d, ℓ)."""
    plans = []
    for name in PlanFactory.names():
        if name == "search" and not include_search:
            continue
        strategy = PlanFactory.create_plan_strategy(name)
        if strategy.supports(structure, d, ell):
            plans.append(strategy.make_plan(structure, d, ell))
    return plans


# ----------------------------------------------------------------------
# Support search
# ----------------------------------------------------------------------

@dataclass
class SupportSearchResult:
    """Best support found by sparse_support_search."""
    census: int
    support: List[Cell]
    plan: PlacementPlan
    candidates: int


def symmetrized_support(cells: Sequence[Cell]) -> List[Cell]:
    """Blocks that can be nonzero after symmetrization: the support and its transpose."""
    return sorted(set(cells) | {(t, s) for s, t in cells})


def sparse_support_search(structure: StructureTag, d: int, ell: int) -> SupportSearchResult:
    """
    Exhaustively search one-block-per-group supports (groups may stay empty
    when ℓ = 1 and a neighbour covers them) for the fewest blocks in the
    symmetrized lification, counting the 4d Kronecker-arm blocks.
    """
    kind = structure.condition(ell)
    groups = list(range(2 * d + 1))
    options: List[List[Optional[Cell]]] = []
    for q in groups:
        cells: List[Optional[Cell]] = list(cells_on_group(kind, d, q))
        if ell == 1:
            cells = [None] + cells
        options.append(cells)
    best: Optional[Tuple[int, List[Cell], Dict[int, Cell]]] = None
    candidates = 0
    for choice in product(*options):
        chosen = {q: cell for q, cell in zip(groups, choice) if cell is not None}
        if ell == 1 and not all(r in chosen or (r - 1) in chosen for r in range(2 * d + 2)):
            continue
        candidates += 1
        support = symmetrized_support(list(chosen.values()))
        census = len(support) + 4 * d
        if best is None or (census, support) < (best[0], best[1]):
            best = (census, support, chosen)
    census, support, chosen = best
    plan = plan_from_cells(kind, d, ell, chosen, lambda r, lo, hi: True, "search")
    logging.info(f"Support search for {structure} d={d} ℓ={ell}: {candidates} candidates, best census {census}")
    return SupportSearchResult(census, support, plan, candidates)
