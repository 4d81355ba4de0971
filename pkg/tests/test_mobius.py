"""
tests/test_mobius.py

Unit tests for Möbius transformations in app/mobius.py.

These tests verify:
- the named matrices A1, A2, A3 and the two Cayley matrices
- M_A on matrix polynomials (identity, λ ↦ -λ, reversal, composition)
- Cayley transforms map T-palindromic polynomials to T-even ones
- parsing and singular-matrix errors
- on seeded random data M_A respects products, Kronecker products, ⋆,
  block partitions and (dual) minimal bases
"""

import numpy as np
import pytest

from app.exceptions import ParseError, SingularMobiusMatrix
from app.generators import random_invertible
from app.matpoly import MatrixPolynomial, random_matrix_polynomial
from app.matrix import Matrix, StarFlavor
from app.minimal_bases import build_Lambda, build_Ld, certify_dual_pair, certify_minimal_basis, row_degrees
from app.mobius import MobiusMatrix, cayley, mobius, mobius_sequence
from app.scalar import Backend, Scalar

Q = Backend.RATIONAL


@pytest.fixture
def P():
    return random_matrix_polynomial(np.random.default_rng(3), 2, 2, 3, Q)


# ------------------------------------------------------------
# TEST: Named matrices
# ------------------------------------------------------------
def test_a1_is_the_identity_transform(P):
    assert mobius(MobiusMatrix.named("A1"), P) == P


def test_a2_negates_odd_coefficients(P):
    image = mobius(MobiusMatrix.named("A2"), P)
    for j in range(P.grade + 1):
        assert image.coefficient(j) == P.coefficient(j) * ((-1) ** j)


def test_a3_is_reversal(P):
    assert mobius(MobiusMatrix.named("A3"), P) == P.rev()


def test_sign_negates_result(P):
    assert mobius(MobiusMatrix.named("A1"), P, sign=-1) == -P


def test_coefficient_map_of_identity():
    assert MobiusMatrix.named("A1").coefficient_map(3) == Matrix.identity(4, Q)


def test_composition_reverses_matrix_order(P):
    A = MobiusMatrix.of(1, 2, 0, 1)
    B = MobiusMatrix.named("cayley+1")
    assert mobius(A, mobius(B, P)) == mobius(B @ A, P)


def test_mobius_sequence_on_plain_scalars():
    # λ ↦ (1 + λ): coefficients of (λ + 1)^1 · 1 for P = λ at grade 1
    out = mobius_sequence([Scalar.of(0, Q), Scalar.of(1, Q)], MobiusMatrix.named("cayley+1"), Scalar.zero(Q))
    assert out == [1, 1]


# ------------------------------------------------------------
# TEST: Cayley transforms
# ------------------------------------------------------------
def test_cayley_of_lambda():
    P = MatrixPolynomial.from_rows([[[0]], [[1]]], Q)
    assert cayley(P, 1).same_values(MatrixPolynomial.from_rows([[[1]], [[1]]], Q))
    assert cayley(P, -1).same_values(MatrixPolynomial.from_rows([[[-1]], [[1]]], Q))


def test_cayley_of_palindromic_is_even():
    # 1 + 3λ + λ² ↦ 5 - λ²
    P = MatrixPolynomial.from_rows([[[1]], [[3]], [[1]]], Q)
    assert cayley(P, 1).same_values(MatrixPolynomial.from_rows([[[5]], [[0]], [[-1]]], Q))


def test_cayley_index_must_be_a_sign():
    with pytest.raises(ValueError):
        cayley(MatrixPolynomial.identity(1, 1, Q), 2)


# ------------------------------------------------------------
# TEST: Matrix operations
# ------------------------------------------------------------
def test_inverse_and_coninvolutory():
    A = MobiusMatrix.of(2, 1, 1, 1)
    I = A @ A.inverse()
    assert I.same_entries(MobiusMatrix.named("A1"))
    assert MobiusMatrix.named("A2").is_coninvolutory()
    assert MobiusMatrix.named("A3").is_coninvolutory()
    assert not MobiusMatrix.named("cayley+1").is_coninvolutory()


def test_singular_matrix_rejected(P):
    singular = MobiusMatrix.of(1, 1, 1, 1)
    with pytest.raises(SingularMobiusMatrix):
        mobius(singular, P)
    with pytest.raises(SingularMobiusMatrix):
        singular.inverse()


# ------------------------------------------------------------
# TEST: Seeded properties
# Purpose: on random nonsingular A and random polynomials (rational
# for even seeds, Gaussian for odd ones), M_A respects products,
# Kronecker products, ⋆, block partitions and minimal bases.
# ------------------------------------------------------------
SEEDS = range(100)


def random_mobius(rng, backend):
    while True:
        if backend is Backend.GAUSSIAN:
            entries = [Scalar.gaussian(int(re), int(im)) for re, im in rng.integers(-3, 4, size=(4, 2))]
        else:
            entries = [Scalar.of(int(x), backend) for x in rng.integers(-3, 4, size=4)]
        A = MobiusMatrix(*entries)
        if not A.det().is_zero():
            return A


def seeded(seed):
    rng = np.random.default_rng(1000 + seed)
    backend = Q if seed % 2 == 0 else Backend.GAUSSIAN
    return rng, backend, random_mobius(rng, backend)


def grade_of(rng):
    return int(rng.integers(0, 3))


def constant(X):
    return MatrixPolynomial.from_coeffs([X], 0)


@pytest.mark.parametrize("seed", SEEDS)
def test_product_rule(seed):
    rng, backend, A = seeded(seed)
    P = random_matrix_polynomial(rng, 2, 3, grade_of(rng), backend)
    R = random_matrix_polynomial(rng, 3, 2, grade_of(rng), backend)
    assert mobius(A, P.matmul(R)).same_values(mobius(A, P).matmul(mobius(A, R)))


@pytest.mark.parametrize("seed", SEEDS)
def test_kronecker_rule(seed):
    rng, backend, A = seeded(seed)
    P = random_matrix_polynomial(rng, 2, 1, grade_of(rng), backend)
    R = random_matrix_polynomial(rng, 1, 2, grade_of(rng), backend)
    assert mobius(A, P.kron(R)).same_values(mobius(A, P).kron(mobius(A, R)))


@pytest.mark.parametrize("seed", SEEDS)
def test_star_interchange(seed):
    rng, backend, A = seeded(seed)
    P = random_matrix_polynomial(rng, 2, 3, grade_of(rng) + 1, backend)
    for sign in (1, -1):
        assert mobius(A, P, sign).star(StarFlavor.TRANSPOSE).same_values(
            mobius(A, P.star(StarFlavor.TRANSPOSE), sign))
        assert mobius(A, P, sign).star(StarFlavor.CONJUGATE_TRANSPOSE).same_values(
            mobius(A.conj(), P.star(StarFlavor.CONJUGATE_TRANSPOSE), sign))


@pytest.mark.parametrize("seed", SEEDS)
def test_blockwise_action(seed):
    rng, backend, A = seeded(seed)
    grade = grade_of(rng) + 1
    blocks = [[random_matrix_polynomial(rng, 2, cols, grade, backend) for cols in (1, 2)] for _ in range(2)]
    whole = MatrixPolynomial.from_blocks(blocks, grade)
    images = [[mobius(A, B) for B in row] for row in blocks]
    assert mobius(A, whole, -1).same_values(-MatrixPolynomial.from_blocks(images, grade))


@pytest.mark.parametrize("seed", SEEDS)
def test_minimal_bases_are_preserved(seed):
    rng, backend, A = seeded(seed)
    epsilon = int(rng.integers(1, 4))
    X = random_invertible(rng, epsilon, backend)
    Y = random_invertible(rng, epsilon + 1, backend)
    K = constant(X).matmul(build_Ld(epsilon, 1, backend)).matmul(constant(Y))
    N = constant(Y.inverse()).matmul(build_Lambda(epsilon, 1, backend)).transpose()
    image_K, image_N = mobius(A, K), mobius(A, N)
    assert certify_minimal_basis(image_K).is_minimal_basis
    assert row_degrees(image_K) == [1] * epsilon
    assert certify_dual_pair(image_K, image_N).is_dual_pair


# ------------------------------------------------------------
# TEST: Parsing
# ------------------------------------------------------------
@pytest.mark.parametrize("text, name", [("a1", "A1"), (" A3 ", "A3"), ("cayley-1", "cayley-1")])
def test_parse_named(text, name):
    assert str(MobiusMatrix.parse(text, Q)) == name


def test_parse_entries():
    A = MobiusMatrix.parse("1, 0, 0, i")
    assert A.d == Scalar.gaussian(0, 1)
    assert A.backend is Backend.GAUSSIAN


@pytest.mark.parametrize("text", ["1,2,3", "A7"])
def test_parse_errors(text):
    with pytest.raises(ParseError):
        MobiusMatrix.parse(text)


def test_named_unknown():
    with pytest.raises(ParseError, match="Unknown Möbius matrix"):
        MobiusMatrix.named("A9")
