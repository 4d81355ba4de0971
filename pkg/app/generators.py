########################
# Test Polynomials     #
########################

"""
Seeded generators of structured matrix polynomials, regular and singular.

Key Features:
1. Structured Projection:
   - ½(X + M_A[±X]^⋆) is M_A-structured for any X

2. Singular Instances:
   - diag(p, G_1, ..., G_r) conjugated by a constant invertible matrix,
     with gadgets G = [0, M_A[±K]^T; K, 0] for K = L_ε(λ^k); each gadget
     contributes one right and one left minimal index εk, and ε = 0 gives
     a zero 1x1 block with indices 0
"""

from dataclasses import dataclass
from fractions import Fraction
import logging
from typing import List, Sequence

import numpy as np

from app.matpoly import MatrixPolynomial, random_matrix_polynomial
from app.matrix import Matrix, block_diag
from app.minimal_bases import build_Ld
from app.mobius import mobius
from app.scalar import Backend, Scalar
from app.structures import StructureTag


def structured_projection(X: MatrixPolynomial, structure: StructureTag) -> MatrixPolynomial:
    """½(X + M_A[±X]^⋆)."""
    A = structure.mobius_matrix(X.backend)
    image = mobius(A, X, structure.sign).star(structure.flavor)
    return (X + image).scale(Fraction(1, 2))


def random_structured(rng: np.random.Generator, structure: StructureTag, n: int, grade: int,
                      backend: Backend = Backend.GAUSSIAN, bound: int = 5) -> MatrixPolynomial:
    """Random n×n polynomial of the given grade with the given structure."""
    X = random_matrix_polynomial(rng, n, n, grade, backend, bound)
    return structured_projection(X, structure)


def random_invertible(rng: np.random.Generator, n: int, backend: Backend = Backend.GAUSSIAN,
                      bound: int = 3) -> Matrix:
    """Unit upper times unit lower triangular: invertible with determinant 1."""
    def entry(i: int, j: int, upper: bool) -> Scalar:
        if i == j:
            return Scalar.one(backend)
        if (j > i) == upper:
            return Scalar.of(int(rng.integers(-bound, bound + 1)), backend)
        return Scalar.zero(backend)

    U = Matrix(n, n, tuple(tuple(entry(i, j, True) for j in range(n)) for i in range(n)), backend)
    W = Matrix(n, n, tuple(tuple(entry(i, j, False) for j in range(n)) for i in range(n)), backend)
    return U @ W


def kernel_gadget(structure: StructureTag, epsilon: int, grade: int,
                  backend: Backend = Backend.GAUSSIAN) -> MatrixPolynomial:
    """
    [0, M_A[±K]^T; K, 0] with K = L_ε(λ^grade), structured like the tag.
    """
    if epsilon == 0:
        return MatrixPolynomial.zero(1, 1, grade, backend)
    K = build_Ld(epsilon, grade, backend)
    B = mobius(structure.mobius_matrix(backend), K, structure.sign).transpose()
    top = MatrixPolynomial.zero(epsilon + 1, epsilon + 1, grade, backend)
    bottom = MatrixPolynomial.zero(epsilon, epsilon, grade, backend)
    return MatrixPolynomial.from_blocks([[top, B], [K, bottom]], grade)


@dataclass
class SingularInstance:
    """A singular structured polynomial and its minimal indices."""
    P: MatrixPolynomial
    right_indices: List[int]
    left_indices: List[int]


def singular_structured(rng: np.random.Generator, structure: StructureTag, grade: int,
                        epsilons: Sequence[int], regular_size: int = 1,
                        backend: Backend = Backend.GAUSSIAN) -> SingularInstance:
    """
    Singular structured polynomial with right and left minimal indices εk for
    every ε in epsilons.

    ⊤-skew scalar polynomials vanish, so ⊤-skew instances need regular_size ≥ 2.
    """
    blocks = [random_structured(rng, structure, regular_size, grade, backend)] if regular_size else []
    blocks += [kernel_gadget(structure, e, grade, backend) for e in epsilons]
    size = sum(b.rows for b in blocks)
    coeffs = [block_diag([b.coefficient(j) for b in blocks]) for j in range(grade + 1)]
    X = random_invertible(rng, size, backend)
    X_star = X.star(structure.flavor)
    P = MatrixPolynomial.from_coeffs([X_star @ c @ X for c in coeffs], grade)
    indices = sorted(e * grade for e in epsilons)
    logging.info(f"Generated singular {structure} polynomial of size {size}, grade {grade}, indices {indices}")
    return SingularInstance(P, indices, list(indices))
