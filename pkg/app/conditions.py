########################
# Placement Conditions #
########################

"""
This module checks and constructs the top-left block M of a block-Kronecker
lification.

M is a (d+1)×(d+1) block polynomial of grade ℓ. Its blocks are grouped by
diagonals: block (s, t) lies on anti-diagonal q = 2d+2-s-t (conditions AS and
ASS) or on diagonal q = s-t+d (condition DS). The coefficients of P are
spread over those groups: P_{ℓq+c} with 0 < c < ℓ sits at power c of group q,
and P_{ℓq} sits either at power 0 of group q or at power ℓ of group q-1.
Under ASS every block in row s carries the extra sign (-1)^{d-s+1}.

Key Features:
1. Slot Arithmetic:
   - slot_coefficient() names the single coefficient a (s, t, power) slot may hold

2. Verification:
   - verify_condition() sums the groups and compares with P, reporting the
     first failing (r, c) with j = ℓr + c

3. Placement Plans:
   - PlacementPlan lists (coefficient, block, power, multiplier) assignments
   - validate() rejects overlaps, misplacements and multipliers that do not
     sum to one per coefficient
   - build_M() turns a valid plan into a BlockPolynomial with provenance
   - JSON round trip for plans stored on disk
"""

from collections import defaultdict
from dataclasses import dataclass, field
import json
import logging
from typing import Dict, List, Optional, Tuple

from app.block_polynomial import BlockPolynomial, constant_blocks
from app.coefficient_expr import CoefficientExpr
from app.exceptions import (
    DimensionMismatch,
    GradeNotOddMultiple,
    IncompletePlan,
    OverlapConflict,
    ParseError,
    SchemaError,
)
from app.matpoly import MatrixPolynomial
from app.matrix import Matrix
from app.scalar import Backend, Scalar, parse_scalar, promote
from app.structures import ConditionKind


# ----------------------------------------------------------------------
# Slot arithmetic
# ----------------------------------------------------------------------

def diagonal_index(kind: ConditionKind, d: int, s: int, t: int) -> int:
    """Group q of block (s, t), 1-based."""
    if kind is ConditionKind.DS:
        return s - t + d
    return 2 * d + 2 - s - t


def slot_coefficient(kind: ConditionKind, d: int, ell: int, s: int, t: int, power: int) -> int:
    """Index j of the only coefficient of P that slot (s, t, power) may carry."""
    q = diagonal_index(kind, d, s, t)
    if power < ell:
        return ell * q + power
    return ell * (q + 1)


def row_sign(kind: ConditionKind, d: int, s: int) -> int:
    """Multiplier the condition attaches to row s."""
    if kind is ConditionKind.ASS:
        return -1 if (d - s + 1) % 2 else 1
    return 1


def cells_on_group(kind: ConditionKind, d: int, q: int) -> List[Tuple[int, int]]:
    """All blocks (s, t) of group q, ordered by row."""
    return [(s, t) for s in range(1, d + 2) for t in range(1, d + 2)
            if diagonal_index(kind, d, s, t) == q]


def check_grade(P: MatrixPolynomial, d: int, ell: int) -> None:
    """
    Raises:
        GradeNotOddMultiple: If the grade of P is not (2d+1)·ℓ.
    """
    if P.grade != (2 * d + 1) * ell:
        raise GradeNotOddMultiple(
            f"Grade {P.grade} is not (2d+1)·ℓ = {(2 * d + 1) * ell} for d={d}, ℓ={ell}"
        )


def split_grade(k: int, ell: int) -> int:
    """
    d with k = (2d+1)·ℓ.

    Raises:
        GradeNotOddMultiple: If no such d exists.
    """
    if ell < 1 or k % ell or (k // ell) % 2 == 0:
        raise GradeNotOddMultiple(f"Grade {k} is not an odd multiple of ℓ = {ell}")
    return (k // ell - 1) // 2


# ----------------------------------------------------------------------
# Verification
# ----------------------------------------------------------------------

@dataclass
class ConditionCheck:
    """Result of verify_condition."""
    holds: bool
    failing: Optional[Tuple[int, int]] = None
    coefficient: Optional[int] = None

    def __bool__(self) -> bool:
        return self.holds

    def describe(self) -> str:
        if self.holds:
            return "condition holds"
        r, c = self.failing
        return f"condition fails at (r, c) = ({r}, {c}), coefficient P_{self.coefficient}"


def verify_condition(M: MatrixPolynomial, P: MatrixPolynomial, kind: ConditionKind,
                     d: int, ell: int) -> ConditionCheck:
    """
    Check whether M satisfies condition `kind` for P.

    Raises:
        DimensionMismatch: If M is not (d+1)n square for P of size n.
        GradeNotOddMultiple: If the grade of P is not (2d+1)·ℓ.
    """
    n = P.rows
    if P.rows != P.cols or M.rows != (d + 1) * n or M.cols != (d + 1) * n:
        raise DimensionMismatch(f"M of size {M.shape} does not match P of size {P.shape} with d={d}")
    check_grade(P, d, ell)
    if M.degree > ell:
        return ConditionCheck(False, (2 * d + 1, 0), (2 * d + 1) * ell)
    k = P.grade
    sums: Dict[int, Matrix] = {}
    for s in range(1, d + 2):
        sign = row_sign(kind, d, s)
        for t in range(1, d + 2):
            block = M.block(s, t, n)
            for i in range(ell + 1):
                j = slot_coefficient(kind, d, ell, s, t, i)
                value = block.coefficient(i)
                if value.is_zero():
                    continue
                if j > k:
                    return ConditionCheck(False, divmod(j, ell), j)
                sums[j] = sums[j] + value * sign if j in sums else value * sign
    for j in range(k + 1):
        expected = P.coefficient(j)
        got = sums.get(j, Matrix.zeros(n, n, P.backend))
        if got != expected:
            r, c = divmod(j, ell)
            return ConditionCheck(False, (r, c), j)
    return ConditionCheck(True)


# ----------------------------------------------------------------------
# Placement plans
# ----------------------------------------------------------------------

@dataclass(frozen=True)
class Assignment:
    """Put alpha·P_coefficient at power `power` of block (s, t)."""
    coefficient: int
    s: int
    t: int
    power: int
    alpha: Scalar = field(default_factory=lambda: Scalar.one(Backend.GAUSSIAN))

    def to_dict(self) -> dict:
        return {"j": self.coefficient, "s": self.s, "t": self.t,
                "i": self.power, "alpha": str(self.alpha)}

    @classmethod
    def from_dict(cls, data: dict) -> "Assignment":
        try:
            return cls(int(data["j"]), int(data["s"]), int(data["t"]), int(data["i"]),
                       parse_scalar(str(data.get("alpha", "1")), Backend.GAUSSIAN))
        except (KeyError, TypeError, ValueError, ParseError) as e:
            raise SchemaError(f"Invalid assignment entry: {data!r}") from e


@dataclass
class PlacementPlan:
    """
    Where every coefficient of P goes inside M.

    Attributes:
        condition: AS, ASS or DS.
        d: M has (d+1)×(d+1) blocks.
        ell: M has grade ℓ.
        assignments: Placement list.
        name: Plan name for reports.
    """
    condition: ConditionKind
    d: int
    ell: int
    assignments: List[Assignment] = field(default_factory=list)
    name: str = ""

    @property
    def grade(self) -> int:
        return (2 * self.d + 1) * self.ell

    def place(self, j: int, s: int, t: int, power: int, alpha=1) -> "PlacementPlan":
        self.assignments.append(Assignment(j, s, t, power, Scalar.of(alpha, Backend.GAUSSIAN)))
        return self

    def blocks_used(self) -> List[Tuple[int, int]]:
        return sorted({(a.s, a.t) for a in self.assignments})

    def validate(self) -> None:
        """
        Raises:
            IncompletePlan: On out-of-range, misplaced or missing coefficients,
                or multipliers that do not sum to one.
            OverlapConflict: If one slot receives two different coefficients.
        """
        d, ell, kind = self.d, self.ell, self.condition
        slots: Dict[Tuple[int, int, int], int] = {}
        for a in self.assignments:
            if not (1 <= a.s <= d + 1 and 1 <= a.t <= d + 1 and 0 <= a.power <= ell):
                raise IncompletePlan(f"Slot ({a.s}, {a.t}) power {a.power} is outside M for d={d}, ℓ={ell}")
            if not 0 <= a.coefficient <= self.grade:
                raise IncompletePlan(f"P_{a.coefficient} is not a coefficient of a grade-{self.grade} polynomial")
            key = (a.s, a.t, a.power)
            if key in slots and slots[key] != a.coefficient:
                raise OverlapConflict(
                    f"Slot ({a.s}, {a.t}) power {a.power} receives P_{slots[key]} and P_{a.coefficient}"
                )
            slots[key] = a.coefficient
        for a in self.assignments:
            expected = slot_coefficient(kind, d, ell, a.s, a.t, a.power)
            if expected != a.coefficient:
                raise IncompletePlan(
                    f"P_{a.coefficient} cannot sit at ({a.s}, {a.t}) power {a.power} under {kind.value}; "
                    f"that slot belongs to P_{expected}"
                )
        totals: Dict[int, Scalar] = defaultdict(lambda: Scalar.zero(Backend.GAUSSIAN))
        for a in self.assignments:
            totals[a.coefficient] = totals[a.coefficient] + promote(a.alpha, Backend.GAUSSIAN) * row_sign(kind, d, a.s)
        for j in range(self.grade + 1):
            if j not in totals:
                raise IncompletePlan(f"P_{j} is not placed")
            if totals[j] != 1:
                raise IncompletePlan(f"Multipliers of P_{j} sum to {totals[j]}, not 1")

    # ------------------------------------------------------------------
    # Serialization
    # ------------------------------------------------------------------

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "kind": self.condition.value,
            "d": self.d,
            "ell": self.ell,
            "assignments": [a.to_dict() for a in self.assignments],
        }

    @classmethod
    def from_dict(cls, data: dict) -> "PlacementPlan":
        """
        Raises:
            SchemaError: If required keys are missing or malformed.
        """
        try:
            return cls(
                condition=ConditionKind(data["kind"]),
                d=int(data["d"]),
                ell=int(data["ell"]),
                assignments=[Assignment.from_dict(a) for a in data["assignments"]],
                name=str(data.get("name", "")),
            )
        except (KeyError, TypeError, ValueError) as e:
            raise SchemaError(f"Invalid placement plan: {e}") from e

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2)

    @classmethod
    def from_json(cls, text: str) -> "PlacementPlan":
        try:
            data = json.loads(text)
        except json.JSONDecodeError as e:
            raise SchemaError(f"Placement plan is not valid JSON: {e}") from e
        return cls.from_dict(data)


def build_M(P: MatrixPolynomial, plan: PlacementPlan) -> BlockPolynomial:
    """
    Top-left block for P according to a validated plan, with provenance.

    Raises:
        IncompletePlan, OverlapConflict: From plan validation.
        GradeNotOddMultiple: If P's grade does not match the plan.
    """
    check_grade(P, plan.d, plan.ell)
    if P.rows != P.cols:
        raise DimensionMismatch(f"P must be square, got {P.shape}")
    plan.validate()
    backend = P.backend
    grid = constant_blocks(plan.d + 1, plan.d + 1, plan.ell, backend)
    for a in plan.assignments:
        cell = grid[a.s - 1][a.t - 1]
        cell[a.power] = cell[a.power] + CoefficientExpr.coefficient(a.coefficient, promote(a.alpha, backend),
                                                                    backend)
    M = BlockPolynomial.from_provenance(grid, P.coeffs, P.rows, plan.ell, backend=backend)
    logging.info(f"Built M with plan {plan.name or '<unnamed>'}: {M.census()} nonzero blocks")
    return M

