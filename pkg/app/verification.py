########################
# Verification         #
########################

"""
This module certifies, exactly, the claims made about a constructed
ℓ-ification: equivalence to diag(I_s, P), strongness, determinant ratio,
minimal indices, structure, the companion property and block sparsity.

Key Features:
1. Certification:
   - certify_lification() compares Smith forms of L and P, and of their
     reversals, and records the determinant ratio and minimal indices

2. Minimal Indices:
   - measure_minimal_indices() sweeps the degree of polynomial null vectors
     through convolution matrices and counts new vectors per degree

3. Predicates:
   - check_structure() and check_mobius_structure() test M_A[±P] = P^⋆
   - companion_predicate() reads the provenance labels of L

4. Sparsity:
   - sparsity_census() compares the nonzero block count with 5d+1, 6d+1
     and the 7d+1 floor of symmetric and alternating quadratifications
"""

from dataclasses import dataclass, field
import logging
from typing import Dict, List, Optional, Sequence, Union

from app.block_polynomial import BlockPolynomial
from app.coefficient_expr import LabelKind
from app.exceptions import DimensionMismatch, MissingProvenance, NotSingular, SizeCapExceeded
from app.lification_config import DEFAULT_SMITH_SIZE_CAP
from app.matpoly import MatrixPolynomial, det_poly
from app.matrix import Matrix, StarFlavor
from app.mobius import MobiusMatrix, mobius
from app.polynomial import ScalarPolynomial
from app.scalar import Scalar
from app.smith import Progress, smith_form
from app.structures import ConditionKind, StructureTag

PolyLike = Union[BlockPolynomial, MatrixPolynomial]


def _base(P: PolyLike) -> MatrixPolynomial:
    return P.base if isinstance(P, BlockPolynomial) else P


@dataclass
class VerificationReport:
    """Everything certify_lification found out about (L, P)."""
    is_lification: bool
    is_strong: bool
    padding: int
    invariant_factors_P: List[ScalarPolynomial] = field(default_factory=list)
    invariant_factors_L: List[ScalarPolynomial] = field(default_factory=list)
    det_ratio: Union[Scalar, str, None] = None
    right_indices_P: Optional[List[int]] = None
    right_indices_L: Optional[List[int]] = None
    left_indices_P: Optional[List[int]] = None
    left_indices_L: Optional[List[int]] = None
    structure_checks: Dict[str, bool] = field(default_factory=dict)
    block_census: Optional[int] = None
    normalization: str = "monic"

    def to_dict(self) -> dict:
        return {
            "is_lification": self.is_lification,
            "is_strong": self.is_strong,
            "padding": self.padding,
            "normalization": self.normalization,
            "invariant_factors_P": [str(f) for f in self.invariant_factors_P],
            "invariant_factors_L": [str(f) for f in self.invariant_factors_L],
            "det_ratio": None if self.det_ratio is None else str(self.det_ratio),
            "right_indices_P": self.right_indices_P,
            "right_indices_L": self.right_indices_L,
            "left_indices_P": self.left_indices_P,
            "left_indices_L": self.left_indices_L,
            "structure_checks": dict(self.structure_checks),
            "block_census": self.block_census,
        }


# ----------------------------------------------------------------------
# Ranks, determinants, Smith forms
# ----------------------------------------------------------------------

def normal_rank(P: PolyLike) -> int:
    """Rank over the rational functions, from evaluations at 0..min(m,n)·grade."""
    P = _base(P)
    points = min(P.rows, P.cols) * max(P.degree, 0) + 1
    rank = 0
    for x in range(points):
        rank = max(rank, P(x).rank())
        if rank == min(P.rows, P.cols):
            break
    return rank


def det_ratio(L: PolyLike, P: PolyLike) -> Union[Scalar, str, None]:
    """
    γ with det L = γ·det P, "nonconstant" when no constant works, None for singular P.
    """
    L, P = _base(L), _base(P)
    det_P = det_poly(P)
    if det_P.is_zero():
        return None
    q, rem = det_poly(L).divmod(det_P)
    if rem.is_zero() and q.degree == 0:
        return q.coefficient(0)
    return "nonconstant"


def _equivalent(factors_L: List[ScalarPolynomial], factors_P: List[ScalarPolynomial], s: int) -> bool:
    if len(factors_L) != s + len(factors_P):
        return False
    return all(f.degree == 0 for f in factors_L[:s]) and factors_L[s:] == factors_P


def certify_lification(L: PolyLike, P: PolyLike, ell: int, k: Optional[int] = None,
                       size_cap: int = DEFAULT_SMITH_SIZE_CAP, progress: Optional[Progress] = None,
                       indices: bool = True, structures: Sequence[StructureTag] = ()) -> VerificationReport:
    """
    Decide whether L is a (strong) ℓ-ification of P.

    Args:
        L: Candidate of grade ℓ.
        P: Polynomial of grade k.
        ell: Grade used to reverse L.
        k: Grade used to reverse P, P.grade by default.
        size_cap: Size cap for Smith forms and minimal indices.
        progress: Cancellation callback forwarded to smith_form.
        indices: Also measure minimal indices when P is singular.
        structures: Tags to check L against.

    Raises:
        DimensionMismatch: If L is smaller than P or not square.
        FloatBackendUnsupported, SizeCapExceeded, ComputationCancelled: From smith_form.
    """
    census = L.census() if isinstance(L, BlockPolynomial) else None
    L, P = _base(L), _base(P)
    k = P.grade if k is None else k
    s = L.rows - P.rows
    if s < 0 or L.rows != L.cols or P.rows != P.cols:
        raise DimensionMismatch(f"L of size {L.shape} cannot ℓ-ify P of size {P.shape}")
    factors_P = smith_form(P, size_cap, progress)
    factors_L = smith_form(L, size_cap, progress)
    is_lification = _equivalent(factors_L, factors_P, s)
    is_strong = False
    if is_lification:
        rev_P = smith_form(P.rev(k), size_cap, progress)
        rev_L = smith_form(L.rev(ell), size_cap, progress)
        is_strong = _equivalent(rev_L, rev_P, s)
    report = VerificationReport(is_lification, is_strong, s, factors_P, factors_L, block_census=census)
    regular = len(factors_P) == P.rows
    if regular:
        report.det_ratio = det_ratio(L, P)
    elif indices:
        report.right_indices_P = measure_minimal_indices(P, "right", size_cap)
        report.left_indices_P = measure_minimal_indices(P, "left", size_cap)
        report.right_indices_L = measure_minimal_indices(L, "right", size_cap)
        report.left_indices_L = measure_minimal_indices(L, "left", size_cap)
    for tag in structures:
        report.structure_checks[str(tag)] = check_structure(L, tag)
    logging.info(f"Certified L ({L.rows}x{L.cols}) against P ({P.rows}x{P.cols}): "
                 f"lification={is_lification}, strong={is_strong}")
    return report


# ----------------------------------------------------------------------
# Minimal indices
# ----------------------------------------------------------------------

def _convolution(P: MatrixPolynomial, degree: int) -> Matrix:
    """Matrix of x_0..x_δ ↦ coefficients of P(λ)·Σλ^i x_i."""
    m, n, g = P.rows, P.cols, P.grade
    zero = Matrix.zeros(m, n, P.backend)
    rows = []
    for t in range(g + degree + 1):
        rows.append([P.coefficient(t - i) if 0 <= t - i <= g else zero for i in range(degree + 1)])
    return Matrix.block(rows)


def measure_minimal_indices(P: PolyLike, side: str = "right",
                            size_cap: int = DEFAULT_SMITH_SIZE_CAP) -> List[int]:
    """
    Sorted minimal indices of P on one side.

    The number N(δ) of independent polynomial null vectors of degree ≤ δ is
    n(δ+1) - rank C_δ; its first difference counts indices ≤ δ and the
    second difference counts indices equal to δ.

    Raises:
        NotSingular: If the null space on that side is trivial.
        SizeCapExceeded: If P is too large or the sweep passes size·grade.
    """
    P = _base(P)
    if side not in ("right", "left"):
        raise ValueError(f"side must be 'right' or 'left', got {side!r}")
    if side == "left":
        P = P.transpose()
    if max(P.rows, P.cols) > size_cap:
        raise SizeCapExceeded(f"A {P.rows}x{P.cols} polynomial exceeds the size cap {size_cap}")
    nullity = P.cols - normal_rank(P)
    if nullity == 0:
        raise NotSingular(f"P has no {side} null space")
    cap = max(P.rows, P.cols) * max(P.grade, 1)
    found: List[int] = []
    previous_N, previous_C = 0, 0
    for degree in range(cap + 1):
        N = P.cols * (degree + 1) - _convolution(P, degree).rank()
        C = N - previous_N
        found += [degree] * (C - previous_C)
        if C == nullity:
            return found
        previous_N, previous_C = N, C
    raise SizeCapExceeded(f"Minimal indices exceed the degree cap {cap}")


# ----------------------------------------------------------------------
# Structure and companion predicates
# ----------------------------------------------------------------------

def check_mobius_structure(P: PolyLike, A: MobiusMatrix, sign: int, flavor=StarFlavor.TRANSPOSE) -> bool:
    """M_A[±P] = P^⋆ at the grade of P."""
    P = _base(P)
    if P.rows != P.cols:
        return False
    return mobius(A.to(P.backend), P, sign).same_values(P.star(StarFlavor.parse(flavor)))


def check_structure(P: PolyLike, tag: StructureTag) -> bool:
    """Whether P has the structure named by tag."""
    P = _base(P)
    return check_mobius_structure(P, tag.mobius_matrix(P.backend), tag.sign, tag.flavor)


def companion_predicate(L: BlockPolynomial, mode: str = "companion") -> bool:
    """
    Companion: every block coefficient is 0, αI or αP_j.
    Generalized: every block coefficient is a polynomial in P_0, ..., P_k,
    that is, a ring expression in I and unstarred coefficients of the
    source family only.

    In both modes the expressions must evaluate to the stored numbers.

    Raises:
        MissingProvenance: If L carries no provenance or no source coefficients.
    """
    if mode not in ("companion", "generalized"):
        raise ValueError(f"Unknown companion mode: {mode}")
    labels = L.coefficient_labels()
    if L.source_coeffs is None:
        raise MissingProvenance("Provenance without source coefficients cannot be checked")
    count = len(L.source_coeffs)
    expressions = [e for row in L.provenance for exprs in row for e in exprs]
    if not all(e.is_polynomial_in(L.symbol, count) for e in expressions) or not L.rescan():
        return False
    if mode == "companion":
        return all(label.kind is not LabelKind.EXPRESSION for label in labels.values())
    return True


# ----------------------------------------------------------------------
# Sparsity
# ----------------------------------------------------------------------

@dataclass
class SparsityReport:
    """Nonzero block count of L against the known bounds."""
    census: int
    d: int
    ell: int
    sparse_bound: int
    structural_floor: Optional[int] = None

    @property
    def is_sparse(self) -> bool:
        return self.census == self.sparse_bound

    @property
    def meets_floor(self) -> bool:
        return self.structural_floor is None or self.census >= self.structural_floor

    def describe(self) -> str:
        text = f"{self.census} nonzero blocks (sparse bound {self.sparse_bound}"
        if self.structural_floor is not None:
            text += f", structural floor {self.structural_floor}"
        return text + ")"


def sparsity_census(L: BlockPolynomial, d: int, ell: int,
                    condition: Optional[ConditionKind] = None) -> SparsityReport:
    """
    Count nonzero blocks: 5d+1 is the minimum for ℓ = 1 and 6d+1 for ℓ > 1;
    symmetric and alternating quadratifications and beyond need 7d+1.
    """
    bound = 5 * d + 1 if ell == 1 else 6 * d + 1
    floor = None
    if ell > 1 and condition in (ConditionKind.AS, ConditionKind.ASS):
        floor = 7 * d + 1
    return SparsityReport(L.census(), d, ell, bound, floor)
