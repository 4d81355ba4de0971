########################
# Minimal Bases        #
########################

"""
This module builds the Kronecker minimal bases used as the arms of a
block-Kronecker lification and certifies minimal-basis properties exactly.

Key Features:
1. Builders:
   - L_d(λ^ℓ): d×(d+1), -1 on the diagonal, λ^ℓ on the superdiagonal
   - Λ_d(λ^ℓ): the column [λ^{dℓ}, ..., λ^ℓ, 1]^T with L_d Λ_d = 0
   - Möbius images of both, with closed forms for A1, A2 and A3

2. Certification:
   - Full row rank at every point: gcd of the maximal minors is constant
   - Row reducedness: the highest-row-degree coefficient has full row rank
   - Dual pairs: K N^T = 0, complementary sizes, equal row-degree sums
"""

from dataclasses import dataclass, field
from itertools import combinations
from math import comb
import logging
from typing import List, Optional

from app.exceptions import DimensionMismatch, TooManyMinors
from app.lification_config import DEFAULT_MINOR_CAP
from app.matpoly import MatrixPolynomial, det_poly
from app.matrix import Matrix
from app.mobius import MobiusMatrix, mobius
from app.polynomial import ScalarPolynomial, poly_gcd
from app.scalar import Backend
from app.structures import canonical_mobius_name


def build_Ld(d: int, ell: int = 1, backend: Backend = Backend.GAUSSIAN) -> MatrixPolynomial:
    """
    L_d(λ^ℓ) as a d×(d+1) polynomial of grade ℓ.

    For d = 0 the result is the empty 0×1 polynomial.
    """
    if d < 0 or ell < 1:
        raise ValueError("d must be non-negative and ℓ positive")
    low = Matrix.from_rows([[-1 if j == i else 0 for j in range(d + 1)] for i in range(d)],
                           backend, cols=d + 1)
    high = Matrix.from_rows([[1 if j == i + 1 else 0 for j in range(d + 1)] for i in range(d)],
                            backend, cols=d + 1)
    return MatrixPolynomial.from_coeffs([low, high], 1).substitute_power(ell)


def build_Lambda(d: int, ell: int = 1, backend: Backend = Backend.GAUSSIAN) -> MatrixPolynomial:
    """Λ_d(λ^ℓ) as a (d+1)×1 column of grade d·ℓ."""
    if d < 0 or ell < 1:
        raise ValueError("d must be non-negative and ℓ positive")
    coeffs = []
    for j in range(d + 1):
        coeffs.append(Matrix.from_rows([[1 if i == d - j else 0] for i in range(d + 1)], backend))
    return MatrixPolynomial.from_coeffs(coeffs, d).substitute_power(ell)


def closed_form_Ld(A: MobiusMatrix, sign: int, d: int, ell: int,
                   backend: Backend = Backend.GAUSSIAN) -> Optional[MatrixPolynomial]:
    """
    M_A[±L_d](λ^ℓ) written down directly for A1, A2 and A3; None otherwise.

    A1 keeps L_d(λ^ℓ), A2 gives L_d((-1)^ℓ λ^ℓ), A3 gives rev_ℓ L_d(λ^ℓ).
    """
    name = canonical_mobius_name(A)
    base = build_Ld(d, ell, backend)
    if name == "A1":
        result = base
    elif name == "A2":
        result = base if ell % 2 == 0 else MatrixPolynomial.from_coeffs(
            [base.coefficient(0)] + [Matrix.zeros(d, d + 1, backend)] * (ell - 1) + [-base.coefficient(ell)], ell)
    elif name == "A3":
        result = base.rev(ell)
    else:
        return None
    return result if sign > 0 else -result


def mobius_Ld(A: MobiusMatrix, sign: int, d: int, ell: int,
              backend: Backend = Backend.GAUSSIAN) -> MatrixPolynomial:
    """M_A[±L_d(λ^ℓ)] at grade ℓ."""
    return mobius(A, build_Ld(d, ell, backend), sign)


def mobius_Lambda(A: MobiusMatrix, sign: int, d: int, ell: int,
                  backend: Backend = Backend.GAUSSIAN) -> MatrixPolynomial:
    """M_A[±Λ_d(λ^ℓ)] at grade d·ℓ."""
    return mobius(A, build_Lambda(d, ell, backend), sign)


# ----------------------------------------------------------------------
# Certification
# ----------------------------------------------------------------------

def row_degrees(K: MatrixPolynomial) -> List[int]:
    """Degree of each row, -1 for a zero row."""
    degrees = []
    for i in range(K.rows):
        degrees.append(max((j for j, c in enumerate(K.coeffs)
                            if any(not x.is_zero() for x in c.entries[i])), default=-1))
    return degrees


def highest_row_degree_coefficient(K: MatrixPolynomial) -> Matrix:
    degrees = row_degrees(K)
    rows = []
    for i, deg in enumerate(degrees):
        rows.append(K.coefficient(max(deg, 0)).entries[i])
    return Matrix(K.rows, K.cols, tuple(rows), K.backend)


@dataclass
class MinimalBasisCertificate:
    """Outcome of certify_minimal_basis."""
    is_minimal_basis: bool
    full_rank_everywhere: bool
    row_reduced: bool
    row_degrees: List[int] = field(default_factory=list)
    minor_gcd: Optional[ScalarPolynomial] = None


def certify_minimal_basis(K: MatrixPolynomial, minor_cap: int = DEFAULT_MINOR_CAP) -> MinimalBasisCertificate:
    """
    Certify that K (m×n, m < n) is a minimal basis.

    Raises:
        TooManyMinors: If C(n, m) exceeds minor_cap.
    """
    m, n = K.rows, K.cols
    degrees = row_degrees(K)
    if m == 0:
        return MinimalBasisCertificate(True, True, True, degrees, ScalarPolynomial.constant(1, K.backend))
    if m > n:
        return MinimalBasisCertificate(False, False, False, degrees, None)
    count = comb(n, m)
    if count > minor_cap:
        raise TooManyMinors(f"{count} maximal minors exceed the cap of {minor_cap}")
    g = ScalarPolynomial.zero(K.backend)
    for cols in combinations(range(n), m):
        sub = MatrixPolynomial(m, m, K.grade, tuple(c.select(range(m), cols) for c in K.coeffs), K.backend)
        g = poly_gcd(g, det_poly(sub))
        if g.degree == 0:
            break
    full_rank = g.degree == 0
    row_reduced = -1 not in degrees and highest_row_degree_coefficient(K).rank() == m
    logging.debug(f"Minimal basis check: full rank {full_rank}, row reduced {row_reduced}")
    return MinimalBasisCertificate(full_rank and row_reduced, full_rank, row_reduced, degrees, g)


@dataclass
class DualPairCertificate:
    """Outcome of certify_dual_pair."""
    is_dual_pair: bool
    product_vanishes: bool
    sizes_complementary: bool
    degree_sums_equal: bool
    first: MinimalBasisCertificate
    second: MinimalBasisCertificate


def certify_dual_pair(K: MatrixPolynomial, N: MatrixPolynomial,
                      minor_cap: int = DEFAULT_MINOR_CAP) -> DualPairCertificate:
    """
    Certify that K (m×n) and N ((n-m)×n, row form) are dual minimal bases.

    Raises:
        DimensionMismatch: If K and N have different column counts.
    """
    if K.cols != N.cols:
        raise DimensionMismatch(f"Column counts {K.cols} and {N.cols} differ")
    product = K.matmul(N.transpose())
    vanishes = product.is_zero()
    complementary = K.rows + N.rows == K.cols
    first = certify_minimal_basis(K, minor_cap)
    second = certify_minimal_basis(N, minor_cap)
    sums_equal = sum(max(d, 0) for d in first.row_degrees) == sum(max(d, 0) for d in second.row_degrees)
    ok = vanishes and complementary and sums_equal and first.is_minimal_basis and second.is_minimal_basis
    return DualPairCertificate(ok, vanishes, complementary, sums_equal, first, second)
