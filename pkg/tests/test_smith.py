"""
tests/test_smith.py

Unit tests for exact Smith normal forms in app/smith.py.

These tests verify:
- monic invariant factors with the divisibility chain
- normal rank of singular inputs
- guards: float backend, size cap and cancellation
"""

from unittest.mock import Mock

import pytest

from app.exceptions import ComputationCancelled, FloatBackendUnsupported, SizeCapExceeded
from app.matpoly import MatrixPolynomial
from app.polynomial import ScalarPolynomial
from app.scalar import Backend, Scalar
from app.smith import smith_form

Q = Backend.RATIONAL


def poly(*coeffs):
    return ScalarPolynomial.from_coeffs(coeffs, Q)


def matpoly(entries, grade):
    return MatrixPolynomial.from_entries([[poly(*e) for e in row] for row in entries], grade, Q)


# ------------------------------------------------------------
# TEST: Invariant factors
# ------------------------------------------------------------
@pytest.mark.parametrize(
    "entries, grade, factors",
    [
        # diag(λ, λ - 1) has invariant factors 1, λ(λ - 1)
        ([[(0, 1), ()], [(), (-1, 1)]], 1, [poly(1), poly(0, -1, 1)]),
        # diag(2λ, λ²) has invariant factors λ, λ²
        ([[(0, 2), ()], [(), (0, 0, 1)]], 2, [poly(0, 1), poly(0, 0, 1)]),
        # unimodular [[1, λ], [0, 1]]
        ([[(1,), (0, 1)], [(), (1,)]], 1, [poly(1), poly(1)]),
        # 1x1 constant
        ([[(3,)]], 0, [poly(1)]),
    ]
)
def test_invariant_factors(entries, grade, factors):
    assert smith_form(matpoly(entries, grade)) == factors


def test_divisibility_chain():
    P = matpoly([[(0, 1), (1,), ()], [(), (0, 1), (1,)], [(1,), (), (0, 0, 1)]], 2)
    factors = smith_form(P)
    for a, b in zip(factors, factors[1:]):
        assert (b % a).is_zero()
    assert all(f.leading == 1 for f in factors)


def test_singular_input_has_fewer_factors():
    P = matpoly([[(0, 1), (0, 1)], [(0, 1), (0, 1)]], 1)
    assert smith_form(P) == [poly(0, 1)]


def test_zero_polynomial():
    assert smith_form(MatrixPolynomial.zero(2, 3, 1, Q)) == []


def test_rectangular_input():
    P = matpoly([[(0, 1), (1,), ()]], 1)
    assert smith_form(P) == [poly(1)]


# ------------------------------------------------------------
# TEST: Guards
# ------------------------------------------------------------
def test_float_backend_rejected():
    with pytest.raises(FloatBackendUnsupported):
        smith_form(MatrixPolynomial.identity(2, 1, Backend.FLOAT))


def test_size_cap():
    with pytest.raises(SizeCapExceeded):
        smith_form(MatrixPolynomial.identity(3, 1, Q), size_cap=2)


def test_progress_is_reported():
    progress = Mock(return_value=True)
    smith_form(MatrixPolynomial.identity(3, 1, Q), progress=progress)
    assert progress.call_count == 3
    progress.assert_called_with(3, 3)


def test_progress_can_cancel():
    with pytest.raises(ComputationCancelled):
        smith_form(MatrixPolynomial.identity(3, 1, Q), progress=lambda step, total: False)


def test_gaussian_invariant_factors():
    # diag(λ, λ² + 1) over Q(i)[λ]: 1 and λ³ + λ
    G = Backend.GAUSSIAN
    lam = ScalarPolynomial.from_coeffs([0, 1], G)
    P = MatrixPolynomial.from_entries([[lam, ScalarPolynomial.zero(G)],
                                       [ScalarPolynomial.zero(G), ScalarPolynomial.from_coeffs([1, 0, 1], G)]], 2, G)
    assert smith_form(P) == [ScalarPolynomial.constant(1, G), ScalarPolynomial.from_coeffs([0, 1, 0, 1], G)]


def test_coprime_gaussian_linear_factors():
    # λ - i and λ + i are coprime, so the second factor is λ² + 1
    G = Backend.GAUSSIAN
    minus = ScalarPolynomial.from_coeffs([Scalar.gaussian(0, -1), 1], G)
    plus = ScalarPolynomial.from_coeffs([Scalar.gaussian(0, 1), 1], G)
    P = MatrixPolynomial.from_entries([[minus, ScalarPolynomial.zero(G)], [ScalarPolynomial.zero(G), plus]], 1, G)
    assert smith_form(P) == [ScalarPolynomial.constant(1, G), ScalarPolynomial.from_coeffs([1, 0, 1], G)]
