########################
# Lification Engine    #
########################

"""
This module assembles block-Kronecker and block minimal bases degree-ℓ matrix
polynomials and recovers the polynomial they ℓ-ify.

Key Features:
1. Block-Kronecker Assembly:
   - L = [M, M_A[±L_d]^T(λ^ℓ)⊗I_n; L_d(λ^ℓ)⊗I_n, 0]
   - symmetrization M̃ = ½(M + M_A[±M]^⋆) for structured outputs
   - build_structured() runs plan → M → M̃ → L for a structured P

2. Block Minimal Bases Assembly:
   - general L = [M, K_2^T; K_1, 0] with certified minimal bases
   - structured variant with K_2 = M_A[±K_1]
   - Kronecker arms with invertible blocks

3. Recovery:
   - recover_P() forms N_2 M N_1^T and reports whether it equals P or -P

4. Classical and Special Forms:
   - Frobenius companion pencils F_1 and F_2
   - the palindromic quadratification of a quartic
   - Cayley images of lifications with provenance in the new coefficients
"""

from dataclasses import dataclass, replace
from fractions import Fraction
import logging
from typing import List, Optional, Sequence, Tuple, Union

from app.block_polynomial import BlockPolynomial, constant_blocks
from app.coefficient_expr import CoefficientExpr
from app.conditions import PlacementPlan, build_M, split_grade
from app.exceptions import (
    IncompletePlan,
    NonConinvolutory,
    NotMinimalBasis,
    ShapeMismatch,
    StructureCheckFailed,
    WrongGrade,
)
from app.lification_config import DEFAULT_MINOR_CAP
from app.matpoly import MatrixPolynomial
from app.matrix import Matrix, StarFlavor, block_diag
from app.minimal_bases import build_Lambda, build_Ld, certify_minimal_basis
from app.mobius import MobiusMatrix, cayley, mobius
from app.plans import PlanFactory
from app.scalar import Backend
from app.structures import ConditionKind, StructureTag, condition_for
from app.verification import check_structure


@dataclass
class LificationResult:
    """
    A constructed ℓ-ification together with its bookkeeping.

    Attributes:
        L: The assembled block polynomial.
        ell, d, k, n: Grade of L, arm size, grade of P, block size.
        condition: Placement condition of the top-left block, if any.
        structure: Structure of P for structured constructions.
        shift: Amount added to every minimal index of P.
        padding: Size of the identity block, size(L) - n.
        M: Top-left block.
        mobius: Möbius matrix of the arms.
        sign: +1 or -1 as in M_A[±·].
        N1, N2: Dual minimal bases (row form) used for recovery.
        plan_name: Placement plan used for M.
    """
    L: BlockPolynomial
    ell: int
    d: int
    k: int
    n: int
    condition: Optional[ConditionKind] = None
    structure: Optional[StructureTag] = None
    shift: int = 0
    padding: int = 0
    M: Optional[BlockPolynomial] = None
    mobius: Optional[MobiusMatrix] = None
    sign: int = 1
    N1: Optional[MatrixPolynomial] = None
    N2: Optional[MatrixPolynomial] = None
    plan_name: str = ""

    @property
    def size(self) -> int:
        return self.L.base.rows

    def census(self) -> int:
        return self.L.census()


@dataclass
class Recovery:
    """Result of recover_P: the triple product and the polynomial it represents."""
    product: MatrixPolynomial
    polynomial: MatrixPolynomial
    negated: bool


# ----------------------------------------------------------------------
# Helpers
# ----------------------------------------------------------------------

def _arm_provenance(K: MatrixPolynomial, n: int, backend: Backend, symbol: str):
    """Provenance grid for K when every n×n block coefficient is a multiple of I_n, else None."""
    if K.rows % n or K.cols % n:
        return None
    grid = constant_blocks(K.rows // n, K.cols // n, K.grade, backend, symbol)
    for s in range(K.rows // n):
        for t in range(K.cols // n):
            block = K.block(s + 1, t + 1, n)
            for i in range(K.grade + 1):
                c = block.coefficient(i)
                alpha = c[0, 0]
                if c != Matrix.identity(n, backend, alpha):
                    return None
                grid[s][t][i] = CoefficientExpr.identity(alpha, backend, symbol)
    return grid


def _assemble(M: BlockPolynomial, top_right: MatrixPolynomial, bottom_left: MatrixPolynomial,
              grade: int) -> BlockPolynomial:
    """[M, top_right; bottom_left, 0] as a block polynomial, keeping provenance when possible."""
    n, backend = M.n, M.backend
    if top_right.rows != M.base.rows or bottom_left.cols != M.base.cols:
        raise ShapeMismatch(f"Arms {top_right.shape} and {bottom_left.shape} do not fit M of size {M.base.shape}")
    zero = MatrixPolynomial.zero(bottom_left.rows, top_right.cols, grade, backend)
    base = MatrixPolynomial.from_blocks([[M.base, top_right], [bottom_left, zero]], grade)
    right = _arm_provenance(top_right, n, backend, M.symbol)
    below = _arm_provenance(bottom_left, n, backend, M.symbol)
    if M.provenance is None or right is None or below is None:
        return BlockPolynomial.plain(base, n)
    filler = constant_blocks(bottom_left.rows // n, top_right.cols // n, grade, backend, M.symbol)
    grid = [list(m_row) + r_row for m_row, r_row in zip(M.provenance, right)]
    grid += [b_row + f_row for b_row, f_row in zip(below, filler)]
    return BlockPolynomial.from_provenance(grid, M.source_coeffs, n, grade, M.flavor, M.symbol, backend)


def _involutive(A: MobiusMatrix, flavor: StarFlavor) -> bool:
    """A·conj(A) = I for conjugate transposition, A·A = I for transposition."""
    if StarFlavor.parse(flavor) is StarFlavor.CONJUGATE_TRANSPOSE:
        return A.is_coninvolutory()
    p = A @ A
    return p.a == 1 and p.b == 0 and p.c == 0 and p.d == 1


def kronecker_duals(A: MobiusMatrix, sign: int, d: int, ell: int, n: int,
                    backend: Backend) -> Tuple[MatrixPolynomial, MatrixPolynomial]:
    """Row-form duals (Λ_d^T(λ^ℓ)⊗I_n, M_A[±Λ_d^T](λ^ℓ)⊗I_n)."""
    N1 = build_Lambda(d, ell, backend).transpose().kron_identity(n)
    N2 = mobius(A, N1, sign)
    return N1, N2


# ----------------------------------------------------------------------
# Block-Kronecker lifications
# ----------------------------------------------------------------------

def assemble_block_kronecker(M: BlockPolynomial, A: MobiusMatrix, sign: int, d: int, ell: int,
                             n: int) -> LificationResult:
    """
    Place M next to the Kronecker arms.

    Raises:
        ShapeMismatch: If M is not (d+1)×(d+1) blocks of size n with grade ℓ.
    """
    if M.n != n or M.block_rows != d + 1 or M.block_cols != d + 1 or M.grade != ell:
        raise ShapeMismatch(
            f"M must have {d + 1}x{d + 1} blocks of size {n} and grade {ell}, "
            f"got {M.block_rows}x{M.block_cols} blocks of size {M.n} and grade {M.grade}"
        )
    backend = M.backend
    A = A.to(backend)
    k = (2 * d + 1) * ell
    N1, N2 = kronecker_duals(A, sign, d, ell, n, backend)
    if d == 0:
        L = M
    else:
        Ld = build_Ld(d, ell, backend)
        top_right = mobius(A, Ld, sign).transpose().kron_identity(n)
        L = _assemble(M, top_right, Ld.kron_identity(n), ell)
    logging.info(f"Assembled block-Kronecker L: d={d}, ℓ={ell}, n={n}, size {L.base.rows}")
    return LificationResult(L, ell, d, k, n, shift=d * ell, padding=L.base.rows - n, M=M,
                            mobius=A, sign=sign, N1=N1, N2=N2)


def symmetrize(M: BlockPolynomial, A: MobiusMatrix, sign: int, flavor=StarFlavor.TRANSPOSE,
               structure: Optional[StructureTag] = None, grade: Optional[int] = None) -> BlockPolynomial:
    """
    M̃ = ½(M + M_A[±M]^⋆).

    When a structure (and the grade of P) is given, starred coefficients in the
    provenance are rewritten with the structure relation.

    Raises:
        NonConinvolutory: If A does not undo itself under the chosen ⋆.
    """
    flavor = StarFlavor.parse(flavor)
    A = A.to(M.backend)
    if not _involutive(A, flavor):
        raise NonConinvolutory(f"Möbius matrix {A} is not coninvolutory for ⋆ = {flavor.value}")
    M = replace(M, flavor=flavor)
    image = M.mobius(A, sign).star()
    result = (M + image).scale(Fraction(1, 2))
    if structure is not None and result.has_provenance():
        k = grade if grade is not None else len(M.source_coeffs) - 1
        result = result.substitute(lambda j: structure.coefficient_relation(j, k))
    return result


def default_plan(structure: StructureTag, d: int, ell: int, name: str = "stacked") -> PlacementPlan:
    return PlanFactory.create_plan_strategy(name).make_plan(structure, d, ell)


def build_structured(P: MatrixPolynomial, structure: StructureTag, ell: int,
                     plan: Optional[PlacementPlan] = None, strict: bool = False) -> LificationResult:
    """
    Structured block-Kronecker ℓ-ification of P.

    Args:
        P: Square polynomial of grade (2d+1)ℓ.
        structure: Structure of P, fixing A, the sign and the condition.
        ell: Grade of the result.
        plan: Placement plan for M, stacked by default.
        strict: Raise instead of warning when P does not have the structure.

    Returns:
        LificationResult: L with M_A[±L] = L^⋆.

    Raises:
        GradeNotOddMultiple: If k/ℓ is not an odd integer.
        StructureCheckFailed: In strict mode when P is not structured.
        IncompletePlan: If the plan does not match d, ℓ or the condition.
    """
    d = split_grade(P.grade, ell)
    n = P.rows
    kind = structure.condition(ell)
    plan = plan or default_plan(structure, d, ell)
    if plan.condition is not kind:
        raise IncompletePlan(
            f"Plan {plan.name or '<unnamed>'} satisfies {plan.condition.value}, "
            f"but {structure} with ℓ={ell} needs {kind.value}"
        )
    if plan.d != d or plan.ell != ell:
        raise IncompletePlan(f"Plan is for d={plan.d}, ℓ={plan.ell}, not d={d}, ℓ={ell}")
    structured = check_structure(P, structure)
    if not structured:
        message = f"P is not {structure}; L will be structured but ℓ-ifies a symmetrized polynomial"
        if strict:
            raise StructureCheckFailed(message)
        logging.warning(message)
    A = structure.mobius_matrix(P.backend)
    sign = structure.sign
    M = build_M(P, plan)
    M_tilde = symmetrize(M, A, sign, structure.flavor, structure if structured else None, P.grade)
    result = assemble_block_kronecker(M_tilde, A, sign, d, ell, n)
    logging.info(f"Built {structure} lification with plan {plan.name or '<unnamed>'}: census {result.census()}")
    return replace(result, condition=kind, structure=structure, plan_name=plan.name)


def build_block_kronecker(P: MatrixPolynomial, A: MobiusMatrix, sign: int, ell: int,
                          plan: Optional[PlacementPlan] = None) -> LificationResult:
    """
    Block-Kronecker ℓ-ification without symmetrization.

    Raises:
        UnsupportedMatrix: If A is not A1, A2 or A3.
    """
    d = split_grade(P.grade, ell)
    kind = condition_for(A, ell)
    if plan is None:
        tag = StructureTag.from_mobius(A, sign, StarFlavor.TRANSPOSE)
        plan = default_plan(tag, d, ell)
    if plan.condition is not kind:
        raise IncompletePlan(f"Plan satisfies {plan.condition.value}, Möbius matrix {A} needs {kind.value}")
    M = build_M(P, plan)
    result = assemble_block_kronecker(M, A, sign, d, ell, P.rows)
    return replace(result, condition=kind, plan_name=plan.name)


def top_left(L: BlockPolynomial, d: int) -> BlockPolynomial:
    """The (d+1)×(d+1)-block top-left corner of L, with provenance."""
    size = (d + 1) * L.n
    base = MatrixPolynomial(size, size, L.grade, tuple(c.submatrix(0, 0, size, size) for c in L.base.coeffs),
                            L.backend)
    grid = None
    if L.provenance is not None:
        grid = tuple(tuple(row[:d + 1]) for row in L.provenance[:d + 1])
    return replace(L, base=base, provenance=grid)


def recover_P(source: Union[LificationResult, BlockPolynomial, MatrixPolynomial],
              A: Optional[MobiusMatrix] = None, sign: int = 1, d: Optional[int] = None,
              ell: Optional[int] = None, n: Optional[int] = None) -> Recovery:
    """
    Triple product N_2 M N_1^T.

    For block-Kronecker constructions N_1 = Λ_d^T(λ^ℓ)⊗I_n and N_2 = M_A[±N_1],
    so the product is ±P and the returned polynomial is P.

    Args:
        source: A LificationResult, a full L (with d given) or M itself.

    Raises:
        ShapeMismatch: If the inputs do not fit together, or a
            LificationResult carries no top-left block or dual bases.
    """
    if isinstance(source, LificationResult):
        if source.M is None or source.N1 is None or source.N2 is None:
            raise ShapeMismatch("Recovery needs M, N1 and N2; build the result with its dual bases")
        M = source.M.base
        N1, N2, sign = source.N1, source.N2, source.sign
        n = source.n
    else:
        if A is None or d is None or ell is None or n is None:
            raise ShapeMismatch("Recovery from a bare polynomial needs A, d, ℓ and n")
        base = source.base if isinstance(source, BlockPolynomial) else source
        size = (d + 1) * n
        if base.rows < size or base.cols < size:
            raise ShapeMismatch(f"A {base.shape} polynomial has no {size}x{size} top-left block")
        M = MatrixPolynomial(size, size, base.grade, tuple(c.submatrix(0, 0, size, size) for c in base.coeffs),
                             base.backend)
        N1, N2 = kronecker_duals(A.to(M.backend), sign, d, ell, n, M.backend)
    if N2.cols != M.rows or N1.cols != M.cols:
        raise ShapeMismatch(f"Duals {N2.shape}, {N1.shape} do not fit M of size {M.shape}")
    product = N2.matmul(M).matmul(N1.transpose())
    polynomial = product if sign > 0 else -product
    return Recovery(product, polynomial, sign < 0)


# ----------------------------------------------------------------------
# Block minimal bases lifications
# ----------------------------------------------------------------------

def _require_minimal(K: MatrixPolynomial, label: str, minor_cap: int) -> None:
    certificate = certify_minimal_basis(K, minor_cap)
    if not certificate.is_minimal_basis:
        raise NotMinimalBasis(f"{label} is not a minimal basis (row degrees {certificate.row_degrees})")


def assemble_general_bmb(M: BlockPolynomial, K1: MatrixPolynomial, K2: MatrixPolynomial,
                         N1: Optional[MatrixPolynomial] = None, N2: Optional[MatrixPolynomial] = None,
                         flavor=StarFlavor.TRANSPOSE, minor_cap: int = DEFAULT_MINOR_CAP) -> LificationResult:
    """
    L = [M, K_2^⋆; K_1, 0] for minimal bases K_1, K_2.

    N1 and N2 are the duals of K1 and K2 in row form; when given they drive
    recovery, and deg N1 is the shift of the right minimal indices.

    Raises:
        NotMinimalBasis: If K1 or K2 fails certification.
        ShapeMismatch: If M does not fit between the arms.
    """
    _require_minimal(K1, "K1", minor_cap)
    _require_minimal(K2, "K2", minor_cap)
    ell = M.grade
    n = M.base.rows - K2.rows
    if n != M.base.cols - K1.rows or n <= 0:
        raise ShapeMismatch(f"M of size {M.base.shape} does not match K1 {K1.shape} and K2 {K2.shape}")
    L = _assemble(M, K2.star(flavor).with_grade(ell), K1.with_grade(ell), ell)
    blocks = L.base.rows // n
    k = ell * blocks
    logging.info(f"Assembled block minimal bases L of size {L.base.rows}, grade {ell}")
    return LificationResult(L, ell, (blocks - 1) // 2, k, n, shift=N1.degree if N1 is not None else 0,
                            padding=L.base.rows - n, M=M, N1=N1, N2=N2)


def structured_bmb(M: BlockPolynomial, K1: MatrixPolynomial, N1: MatrixPolynomial,
                   structure: StructureTag, grade: Optional[int] = None,
                   minor_cap: int = DEFAULT_MINOR_CAP) -> LificationResult:
    """
    Structured block minimal bases polynomial [M̃, M_A[±K_1]^⋆; K_1, 0].

    The dual of M_A[±K_1] is M_A[±N_1], so recovery yields ±P.
    """
    A = structure.mobius_matrix(M.backend)
    sign = structure.sign
    M_tilde = symmetrize(M, A, sign, structure.flavor, structure, grade)
    K2 = mobius(A, K1, sign)
    result = assemble_general_bmb(M_tilde, K1, K2, N1, mobius(A, N1, sign), structure.flavor, minor_cap)
    return replace(result, structure=structure, condition=structure.condition(M.grade), mobius=A, sign=sign)


def invertible_arm(invertibles: Sequence[Matrix], d: int, ell: int, n: int) -> MatrixPolynomial:
    """
    diag(X_1, ..., X_d)·(L_d(λ^ℓ)⊗I_n): row i of the Kronecker arm scaled by X_i.

    Missing X_i default to I_n; the dual stays Λ_d^T(λ^ℓ)⊗I_n.
    """
    backend = invertibles[0].backend if invertibles else Backend.GAUSSIAN
    blocks: List[Matrix] = list(invertibles[:d]) + [Matrix.identity(n, backend)] * (d - len(invertibles))
    left = MatrixPolynomial.constant(block_diag(blocks), 0)
    return left.matmul(build_Ld(d, ell, backend).kron_identity(n), ell)


# ----------------------------------------------------------------------
# Classical and special forms
# ----------------------------------------------------------------------

def frobenius_pencil(P: MatrixPolynomial, which: int = 1) -> BlockPolynomial:
    """
    First (which=1) or second (which=2) Frobenius companion pencil.

    F_1 has top block row [P_{k-1} + λP_k, P_{k-2}, ..., P_0], -I_n on the
    block subdiagonal and λI_n on the rest of the block diagonal. F_2 is its
    block transpose.
    """
    if which not in (1, 2):
        raise ValueError("Frobenius pencil index must be 1 or 2")
    k, n, backend = P.grade, P.rows, P.backend
    if k < 1:
        raise WrongGrade("Frobenius pencils need grade at least 1")
    grid = constant_blocks(k, k, 1, backend)
    grid[0][0] = [CoefficientExpr.coefficient(k - 1, 1, backend), CoefficientExpr.coefficient(k, 1, backend)]
    for t in range(1, k):
        grid[0][t] = [CoefficientExpr.coefficient(k - 1 - t, 1, backend), CoefficientExpr.zero(backend)]
    for s in range(1, k):
        grid[s][s - 1] = [CoefficientExpr.identity(-1, backend), CoefficientExpr.zero(backend)]
        grid[s][s] = [CoefficientExpr.zero(backend), CoefficientExpr.identity(1, backend)]
    if which == 2:
        grid = [[grid[t][s] for t in range(k)] for s in range(k)]
    return BlockPolynomial.from_provenance(grid, P.coeffs, n, 1, backend=backend)


def palindromic_quartic_quadratification(P: MatrixPolynomial) -> BlockPolynomial:
    """
    [P_1 + λ(P_2 - I - P_0P_4) + λ²P_3, I + λ²P_4; P_0 + λ²I, -λI].

    A strong quadratification of any quartic, ⋆-palindromic whenever P is.

    Raises:
        WrongGrade: If P is not of grade 4.
    """
    if P.grade != 4:
        raise WrongGrade(f"The quartic quadratification needs grade 4, got {P.grade}")
    b = P.backend
    p = [CoefficientExpr.coefficient(j, 1, b) for j in range(5)]
    eye = CoefficientExpr.identity(1, b)
    zero = CoefficientExpr.zero(b)
    grid = [
        [[p[1], p[2] - eye - p[0] * p[4], p[3]], [eye, zero, p[4]]],
        [[p[0], zero, eye], [zero, -eye, zero]],
    ]
    return BlockPolynomial.from_provenance(grid, P.coeffs, P.rows, 2, backend=b)


def predict_minimal_index_shift(indices: Sequence[int], shift: int) -> List[int]:
    """Minimal indices of L from those of P: each grows by the shift."""
    return [i + shift for i in sorted(indices)]


def cayley_image(L: BlockPolynomial, P: MatrixPolynomial, which: int = 1) -> BlockPolynomial:
    """
    C_{±1}(L) with provenance re-based onto the coefficients Q_j of C_{±1}(P).

    Raises:
        MissingProvenance: If L has no provenance or it is not linear in P.
    """
    A = MobiusMatrix.named("cayley+1" if which == 1 else "cayley-1", L.backend)
    Q = cayley(P, which)
    image = L.mobius(A)
    transform = A.coefficient_map(P.grade).transpose().inverse()
    return image.rebase(transform, Q.coeffs, symbol="Q")
