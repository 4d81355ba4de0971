"""
tests/test_matpoly.py

Unit tests for matrix polynomials in app/matpoly.py.

These tests verify:
- grade handling (padding, GradeTooSmall, same_values ignoring the grade)
- reversal, ⋆, products, Kronecker products with I_n and λ ↦ λ^ℓ
- block extraction and assembly
- exact determinants
- reversal, ⋆ and determinants of seeded random products
"""

from fractions import Fraction

import numpy as np
import pytest

from app.exceptions import DimensionMismatch, FloatBackendUnsupported, GradeTooSmall, ShapeMismatch
from app.matpoly import MatrixPolynomial, det_poly, random_matrix_polynomial
from app.matrix import Matrix, StarFlavor
from app.polynomial import ScalarPolynomial
from app.scalar import Backend, Scalar

Q = Backend.RATIONAL


def scalar_poly(*coeffs, grade=None):
    """1×1 polynomial with the given coefficients."""
    return MatrixPolynomial.from_rows([[[c]] for c in coeffs], Q, grade)


# ------------------------------------------------------------
# TEST: Grade handling
# ------------------------------------------------------------
def test_grade_pads_with_zero_coefficients():
    p = scalar_poly(1, 2, grade=4)
    assert p.grade == 4
    assert p.degree == 1
    assert p.coefficient(4).is_zero()


def test_grade_below_degree_is_rejected():
    with pytest.raises(GradeTooSmall):
        scalar_poly(1, 2, 3, grade=1)


def test_with_grade_and_same_values():
    p = scalar_poly(1, 2)
    q = p.with_grade(5)
    assert q.grade == 5
    assert p.same_values(q)
    assert q != p
    with pytest.raises(GradeTooSmall):
        p.with_grade(0)


def test_mixed_coefficient_shapes_rejected():
    with pytest.raises(ShapeMismatch):
        MatrixPolynomial.from_coeffs([Matrix.identity(2, Q), Matrix.identity(3, Q)])
    with pytest.raises(ShapeMismatch):
        MatrixPolynomial.from_coeffs([])


# ------------------------------------------------------------
# TEST: Reversal and ⋆
# ------------------------------------------------------------
def test_reversal_with_larger_grade():
    p = scalar_poly(1, 2)
    r = p.rev(3)
    # λ³ (1 + 2/λ) = 2λ² + λ³
    assert r.same_values(scalar_poly(0, 0, 2, 1))


def test_reversal_is_an_involution():
    p = scalar_poly(3, 0, 5, grade=3)
    assert p.rev().rev() == p


def test_reversal_below_degree():
    with pytest.raises(GradeTooSmall):
        scalar_poly(1, 2, 3).rev(1)


def test_star_does_not_conjugate_lambda():
    P = MatrixPolynomial.from_rows([[[Scalar.gaussian(0, 1), 2]], [[1, Scalar.gaussian(3, 1)]]])
    H = P.star(StarFlavor.CONJUGATE_TRANSPOSE)
    assert H.shape == (2, 1)
    assert H.coefficient(0)[0, 0] == Scalar.gaussian(0, -1)
    assert H.coefficient(1)[1, 0] == Scalar.gaussian(3, -1)
    assert P.star("T").coefficient(0)[0, 0] == Scalar.gaussian(0, 1)


# ------------------------------------------------------------
# TEST: Products and substitutions
# ------------------------------------------------------------
def test_matmul_grades_add():
    p = scalar_poly(1, 1)
    q = scalar_poly(-1, 1)
    product = p @ q
    assert product.grade == 2
    assert product.same_values(scalar_poly(-1, 0, 1))


def test_matmul_requested_grade():
    p = scalar_poly(1, 1, grade=3)
    assert p.matmul(scalar_poly(1), grade=1).grade == 1
    with pytest.raises(GradeTooSmall):
        (p @ p).with_grade(1)


def test_matmul_dimension_mismatch():
    a = MatrixPolynomial.identity(2, 1, Q)
    b = MatrixPolynomial.identity(3, 1, Q)
    with pytest.raises(DimensionMismatch):
        a @ b
    with pytest.raises(DimensionMismatch):
        a + b


def test_kron_identity_keeps_grade():
    p = scalar_poly(1, 2, 3)
    k = p.kron_identity(3)
    assert k.shape == (3, 3)
    assert k.grade == 2
    assert k.coefficient(2) == Matrix.identity(3, Q, 3)


def test_substitute_power():
    p = scalar_poly(1, 2)
    s = p.substitute_power(3)
    assert s.grade == 3
    assert s.coefficient(3)[0, 0] == 2
    assert s.coefficient(1).is_zero()
    with pytest.raises(ValueError):
        p.substitute_power(0)


def test_evaluation():
    p = scalar_poly(1, -3, 2)
    assert p(2)[0, 0] == 3


# ------------------------------------------------------------
# TEST: Blocks
# ------------------------------------------------------------
def test_block_roundtrip():
    a = scalar_poly(1, 2)
    b = scalar_poly(0, 0, 5)
    z = MatrixPolynomial.zero(1, 1, 2, Q)
    m = MatrixPolynomial.from_blocks([[a, b], [z, a]])
    assert m.shape == (2, 2)
    assert m.grade == 2
    assert m.block(1, 2, 1) == b
    assert m.block(2, 2, 1).same_values(a)
    replaced = m.with_block(2, 1, b)
    assert replaced.block(2, 1, 1) == b


def test_entries():
    P = MatrixPolynomial.from_rows([[[1, 0], [0, 1]], [[0, 2], [0, 0]]], Q)
    assert P.entry(0, 1) == ScalarPolynomial.from_coeffs([0, 2], Q)
    assert P.entry(1, 0).is_zero()


# ------------------------------------------------------------
# TEST: Determinants
# ------------------------------------------------------------
def test_det_poly():
    # diag(λ, λ - 1) plus an upper entry
    P = MatrixPolynomial.from_rows([[[0, 7], [0, -1]], [[1, 0], [0, 1]]], Q)
    assert det_poly(P) == ScalarPolynomial.from_coeffs([0, -1, 1], Q)


def test_det_poly_of_singular_polynomial():
    P = MatrixPolynomial.from_rows([[[1, 1], [1, 1]], [[0, 1], [0, 1]]], Q)
    assert det_poly(P).is_zero()


def test_det_poly_over_gaussian_rationals():
    # [[λ, i], [i, λ]] has determinant λ² + 1
    G = Backend.GAUSSIAN
    i = Scalar.gaussian(0, 1)
    P = MatrixPolynomial.from_rows([[[0, i], [i, 0]], [[1, 0], [0, 1]]], G)
    assert P.to_domain_matrix().shape == (2, 2)
    assert det_poly(P) == ScalarPolynomial.from_coeffs([1, 0, 1], G)


def test_det_poly_errors():
    with pytest.raises(ShapeMismatch):
        det_poly(MatrixPolynomial.zero(1, 2, 1, Q))
    with pytest.raises(FloatBackendUnsupported):
        det_poly(MatrixPolynomial.identity(2, 1, Backend.FLOAT))


# ------------------------------------------------------------
# TEST: Seeded algebra
# Purpose: reversal, ⋆ and determinants interact with products as
# they should, over rational (even seeds) and Gaussian (odd seeds)
# coefficients with non-integer entries.
# ------------------------------------------------------------
def seeded_pair(seed, inner=2):
    rng = np.random.default_rng(2000 + seed)
    backend = Q if seed % 2 == 0 else Backend.GAUSSIAN
    factor = Scalar.of(Fraction(1, int(rng.integers(1, 5))), backend)
    P = random_matrix_polynomial(rng, 2, inner, int(rng.integers(0, 3)), backend).scale(factor)
    R = random_matrix_polynomial(rng, inner, 2, int(rng.integers(0, 3)), backend)
    return P, R


@pytest.mark.parametrize("seed", range(100))
def test_reversal_of_products(seed):
    P, R = seeded_pair(seed, inner=3)
    assert (P @ R).rev(P.grade + R.grade) == P.rev() @ R.rev()


@pytest.mark.parametrize("flavor", [StarFlavor.TRANSPOSE, StarFlavor.CONJUGATE_TRANSPOSE])
@pytest.mark.parametrize("seed", range(100))
def test_star_of_products(flavor, seed):
    P, R = seeded_pair(seed, inner=3)
    assert (P @ R).star(flavor) == R.star(flavor) @ P.star(flavor)


@pytest.mark.parametrize("seed", range(100))
def test_determinant_is_multiplicative(seed):
    P, R = seeded_pair(seed)
    assert det_poly(P @ R) == det_poly(P) * det_poly(R)


# ------------------------------------------------------------
# TEST: Random polynomials
# ------------------------------------------------------------
def test_random_polynomial_is_reproducible():
    a = random_matrix_polynomial(np.random.default_rng(7), 2, 3, 2, Backend.GAUSSIAN)
    b = random_matrix_polynomial(np.random.default_rng(7), 2, 3, 2, Backend.GAUSSIAN)
    assert a == b
    assert a.shape == (2, 3) and a.grade == 2


def test_random_rational_polynomial_is_real():
    p = random_matrix_polynomial(np.random.default_rng(1), 2, 2, 1, Q)
    assert all(x.is_real() for c in p.coeffs for row in c.entries for x in row)
