"""
tests/test_engine.py

Unit tests for the lification engine in app/engine.py.

These tests verify:
- structured block-Kronecker lifications are structured and recover P
- block counts of the sparse plans (5d+1, 6d+1, 7d+1) and of the grade-14 example
- strict and lenient handling of unstructured input
- block minimal bases assembly with invertible arms
- Frobenius pencils, the palindromic quartic quadratification and Cayley images
"""

from fractions import Fraction
from unittest.mock import patch

import numpy as np
import pytest

from app.coefficient_expr import CoefficientExpr
from app.conditions import build_M
from app.engine import (
    assemble_block_kronecker,
    assemble_general_bmb,
    build_block_kronecker,
    build_structured,
    cayley_image,
    default_plan,
    frobenius_pencil,
    invertible_arm,
    palindromic_quartic_quadratification,
    predict_minimal_index_shift,
    recover_P,
    structured_bmb,
    symmetrize,
    top_left,
)
from app.exceptions import (
    IncompletePlan,
    NonConinvolutory,
    NotMinimalBasis,
    ShapeMismatch,
    StructureCheckFailed,
    UnsupportedMatrix,
    WrongGrade,
)
from app.generators import random_invertible, random_structured
from app.matpoly import MatrixPolynomial, random_matrix_polynomial
from app.matrix import StarFlavor
from app.minimal_bases import build_Lambda
from app.mobius import MobiusMatrix, mobius
from app.plans import PlanFactory
from app.scalar import Backend
from app.structures import StructureKind, StructureTag
from app.verification import check_structure, companion_predicate

Q = Backend.RATIONAL


def structured(kind, n, grade, seed=0, flavor="T", backend=Q):
    tag = StructureTag(kind, StarFlavor.parse(flavor))
    return tag, random_structured(np.random.default_rng(seed), tag, n, grade, backend)


# ------------------------------------------------------------
# TEST: Structured block-Kronecker lifications
# Purpose: every structure, with ℓ = 1, 2, 3, yields L with
# M_A[±L] = L^⋆ whose triple product recovers P.
# ------------------------------------------------------------
@pytest.mark.parametrize("kind", list(StructureKind))
@pytest.mark.parametrize("ell, grade", [(1, 3), (2, 6), (3, 9)])
def test_structured_lification_recovers_P(kind, ell, grade):
    tag, P = structured(kind, 2, grade, seed=ell)
    result = build_structured(P, tag, ell, strict=True)
    assert result.L.grade == ell
    assert result.size == (2 * result.d + 1) * 2
    assert result.padding == 2 * result.d * 2
    assert result.shift == result.d * ell
    assert check_structure(result.L, tag)
    assert result.L.rescan()
    assert recover_P(result).polynomial.same_values(P)


@pytest.mark.parametrize("kind", [StructureKind.SYMMETRIC, StructureKind.PALINDROMIC])
def test_hermitian_flavor(kind):
    tag, P = structured(kind, 2, 3, seed=4, flavor="H", backend=Backend.GAUSSIAN)
    result = build_structured(P, tag, 1, strict=True)
    assert check_structure(result.L, tag)
    assert recover_P(result).polynomial.same_values(P)


def test_top_left_is_the_symmetrized_M():
    tag, P = structured(StructureKind.SYMMETRIC, 1, 5)
    result = build_structured(P, tag, 1)
    assert top_left(result.L, result.d).base == result.M.base


def test_recover_from_bare_polynomial():
    tag, P = structured(StructureKind.ODD, 2, 3)
    result = build_structured(P, tag, 1)
    recovery = recover_P(result.L, tag.mobius_matrix(), tag.sign, result.d, 1, 2)
    assert recovery.negated
    assert recovery.polynomial.same_values(P)
    with pytest.raises(ShapeMismatch):
        recover_P(result.L)


# ------------------------------------------------------------
# TEST: Block counts
# ------------------------------------------------------------
@pytest.mark.parametrize(
    "kind, ell, grade, census",
    [
        (StructureKind.SYMMETRIC, 1, 5, 5 * 2 + 1),
        (StructureKind.PALINDROMIC, 1, 5, 5 * 2 + 1),
        (StructureKind.EVEN, 1, 5, 5 * 2 + 1),
        (StructureKind.PALINDROMIC, 2, 10, 6 * 2 + 1),
        (StructureKind.SYMMETRIC, 2, 10, 7 * 2 + 1),
        (StructureKind.ODD, 3, 15, 7 * 2 + 1),
    ]
)
def test_sparse_plan_census(kind, ell, grade, census):
    tag, P = structured(kind, 2, grade, seed=grade)
    plan = default_plan(tag, 2, ell, "sparse")
    result = build_structured(P, tag, ell, plan)
    assert result.census() == census
    assert result.plan_name == "sparse"


@pytest.mark.slow
def test_grade_fourteen_example_has_nineteen_blocks():
    tag, P = structured(StructureKind.PALINDROMIC, 1, 14, seed=14)
    plan = default_plan(tag, 3, 2, "sparse-example")
    result = build_structured(P, tag, 2, plan, strict=True)
    assert result.census() == 19
    assert check_structure(result.L, tag)
    assert recover_P(result).polynomial.same_values(P)


# ------------------------------------------------------------
# TEST: Input handling
# ------------------------------------------------------------
def test_unstructured_input_warns():
    P = random_matrix_polynomial(np.random.default_rng(2), 2, 2, 3, Q)
    tag = StructureTag(StructureKind.SYMMETRIC)
    with patch("logging.warning") as mock_warning:
        result = build_structured(P, tag, 1)
    assert mock_warning.called
    assert check_structure(result.L, tag)


def test_unstructured_input_strict():
    P = random_matrix_polynomial(np.random.default_rng(2), 2, 2, 3, Q)
    with pytest.raises(StructureCheckFailed):
        build_structured(P, StructureTag(StructureKind.SYMMETRIC), 1, strict=True)


def test_plan_condition_mismatch():
    tag, P = structured(StructureKind.SYMMETRIC, 1, 6)
    wrong = default_plan(StructureTag(StructureKind.PALINDROMIC), 1, 2)
    with pytest.raises(IncompletePlan, match="needs AS"):
        build_structured(P, tag, 2, wrong)


def test_plan_size_mismatch():
    tag, P = structured(StructureKind.SYMMETRIC, 1, 6)
    with pytest.raises(IncompletePlan):
        build_structured(P, tag, 2, default_plan(tag, 2, 2))


def test_unknown_default_plan():
    with pytest.raises(ValueError):
        default_plan(StructureTag(StructureKind.SYMMETRIC), 1, 1, "nowhere")


def test_assembly_shape_mismatch():
    tag, P = structured(StructureKind.SYMMETRIC, 1, 3)
    M = build_M(P, default_plan(tag, 1, 1))
    with pytest.raises(ShapeMismatch):
        assemble_block_kronecker(M, tag.mobius_matrix(), 1, 2, 1, 1)


def test_symmetrize_needs_an_involution():
    tag, P = structured(StructureKind.SYMMETRIC, 1, 3)
    M = build_M(P, default_plan(tag, 1, 1))
    with pytest.raises(NonConinvolutory):
        symmetrize(M, MobiusMatrix.named("cayley+1"), 1)


def test_unsymmetrized_block_kronecker():
    P = random_matrix_polynomial(np.random.default_rng(6), 2, 2, 3, Q)
    A = MobiusMatrix.named("A3")
    result = build_block_kronecker(P, A, 1, 1)
    assert recover_P(result).polynomial.same_values(P)
    with pytest.raises(UnsupportedMatrix):
        build_block_kronecker(P, MobiusMatrix.named("cayley-1"), 1, 1)


# ------------------------------------------------------------
# TEST: Block minimal bases lifications
# ------------------------------------------------------------
def test_structured_bmb_with_invertible_arm():
    tag, P = structured(StructureKind.SYMMETRIC, 2, 3, seed=8)
    rng = np.random.default_rng(8)
    K1 = invertible_arm([random_invertible(rng, 2, Q) * 2], 1, 1, 2)
    N1 = build_Lambda(1, 1, Q).transpose().kron_identity(2)
    M = build_M(P, default_plan(tag, 1, 1))
    result = structured_bmb(M, K1, N1, tag, P.grade)
    assert check_structure(result.L, tag)
    assert result.shift == 1
    assert recover_P(result).polynomial.same_values(P)


def test_recovery_without_dual_bases_is_refused():
    tag, P = structured(StructureKind.SYMMETRIC, 2, 3, seed=8)
    K1 = invertible_arm([], 1, 1, 2)
    M = build_M(P, default_plan(tag, 1, 1))
    result = assemble_general_bmb(M, K1, K1)
    assert result.N1 is None and result.N2 is None
    with pytest.raises(ShapeMismatch, match="Recovery needs M, N1 and N2"):
        recover_P(result)


def test_invertible_arm_defaults_to_identity():
    arm = invertible_arm([], 2, 1, 1)
    assert arm.shape == (2, 3)
    assert arm.coefficient(0)[0, 0] == -1


def test_general_bmb_rejects_non_minimal_arms():
    tag, P = structured(StructureKind.SYMMETRIC, 2, 3)
    M = build_M(P, default_plan(tag, 1, 1))
    zero_arm = MatrixPolynomial.zero(2, 4, 1, Q)
    with pytest.raises(NotMinimalBasis):
        assemble_general_bmb(M, zero_arm, zero_arm)


def test_minimal_index_shift_prediction():
    assert predict_minimal_index_shift([3, 1], 2) == [3, 5]


# ------------------------------------------------------------
# TEST: Classical and special forms
# ------------------------------------------------------------
@pytest.mark.parametrize("which", [1, 2])
def test_frobenius_pencils(which):
    P = random_matrix_polynomial(np.random.default_rng(9), 2, 2, 3, Q)
    F = frobenius_pencil(P, which)
    assert F.grade == 1
    assert F.base.shape == (6, 6)
    assert F.rescan()
    assert F.census() == 3 * 3 - 2
    assert companion_predicate(F)


def test_frobenius_pencil_arguments():
    P = random_matrix_polynomial(np.random.default_rng(9), 1, 1, 2, Q)
    with pytest.raises(ValueError):
        frobenius_pencil(P, 3)
    with pytest.raises(WrongGrade):
        frobenius_pencil(MatrixPolynomial.identity(1, 0, Q))


@pytest.mark.parametrize("flavor", ["T", "H"])
def test_palindromic_quadratification(flavor):
    tag, P = structured(StructureKind.PALINDROMIC, 2, 4, seed=5, flavor=flavor, backend=Backend.GAUSSIAN)
    L = palindromic_quartic_quadratification(P)
    assert L.grade == 2
    assert L.rescan()
    assert check_structure(L, tag)
    assert not companion_predicate(L, "companion")
    assert companion_predicate(L, "generalized")


def test_quadratification_needs_a_quartic():
    with pytest.raises(WrongGrade):
        palindromic_quartic_quadratification(MatrixPolynomial.identity(1, 3, Q))


def test_cayley_image_of_palindromic_lification_is_even():
    tag, P = structured(StructureKind.PALINDROMIC, 1, 6, seed=3)
    result = build_structured(P, tag, 2, strict=True)
    image = cayley_image(result.L, P, 1)
    assert image.symbol == "Q"
    assert image.rescan()
    assert image.base == mobius(MobiusMatrix.named("cayley+1", Q), result.L.base)
    assert check_structure(image, StructureTag(StructureKind.EVEN))


def test_plan_factory_names_cover_default():
    assert "stacked" in PlanFactory.names()


# ------------------------------------------------------------
# TEST: Grade-10 worked quadratifications
# Purpose: the symmetric, odd and palindromic quadratifications of a
# grade-10 P carry exactly the displayed block entries, with the ½
# multipliers in M̃ and the structured arms beside it.
# ------------------------------------------------------------
HALF = Fraction(1, 2)
NONE = ()
ID = ((None, 1),)
MINUS_ID = ((None, -1),)


def p(j, alpha=1):
    return ((j, alpha),)


def entry(*powers):
    """Σ_i λ^i powers[i] as a padded grade-2 cell; j=None stands for I."""
    exprs = []
    for terms in powers + (NONE,) * (3 - len(powers)):
        e = CoefficientExpr.zero(Q)
        for j, alpha in terms:
            e = e + (CoefficientExpr.identity(alpha, Q) if j is None
                     else CoefficientExpr.coefficient(j, alpha, backend=Q))
        exprs.append(e)
    return tuple(exprs)


def quadratification_grid(m_tilde, first, second):
    """[M̃, arm; L_2(λ²)⊗I, 0] where the arm column pattern is (first, second)."""
    zero = entry()
    arm = ((first, zero), (second, first), (zero, second))
    below = ((entry(MINUS_ID), entry(NONE, NONE, ID), zero), (zero, entry(MINUS_ID), entry(NONE, NONE, ID)))
    top = tuple(tuple(m_row) + arm_row for m_row, arm_row in zip(m_tilde, arm))
    return top + tuple(row + (zero, zero) for row in below)


EXAMDUPLIC_CASES = {
    "L_S": (StructureKind.SYMMETRIC, "examduplic", quadratification_grid(
        ((entry(NONE, p(9), p(10)), entry(p(6, HALF), p(7, HALF), p(8, HALF)), entry()),
         (entry(p(6, HALF), p(7, HALF), p(8, HALF)), entry(p(4), p(5)), entry(p(2, HALF), p(3, HALF))),
         (entry(), entry(p(2, HALF), p(3, HALF)), entry(p(0), p(1)))),
        entry(MINUS_ID), entry(NONE, NONE, ID))),
    "L_O": (StructureKind.ODD, "examduplic-alternating", quadratification_grid(
        ((entry(p(8), p(9), p(10)), entry(p(6, HALF), p(7, HALF)), entry(p(4, HALF))),
         (entry(p(6, HALF), p(7, HALF)), entry(NONE, p(5)), entry(NONE, p(3, HALF))),
         (entry(p(4, HALF)), entry(NONE, p(3, HALF)), entry(p(0), p(1), p(2)))),
        entry(ID), entry(NONE, NONE, MINUS_ID))),
    "L_P": (StructureKind.PALINDROMIC, "examduplic", quadratification_grid(
        ((entry(p(4), p(5), p(6)), entry(NONE, p(3, HALF)), entry(p(0), p(1), p(2))),
         (entry(NONE, p(7, HALF)), entry(), entry(NONE, p(3, HALF))),
         (entry(p(8), p(9), p(10)), entry(NONE, p(7, HALF)), entry())),
        entry(NONE, NONE, MINUS_ID), entry(ID))),
}


@pytest.mark.parametrize("caption", list(EXAMDUPLIC_CASES))
def test_examduplic_blocks(caption):
    kind, plan_name, expected = EXAMDUPLIC_CASES[caption]
    tag, P = structured(kind, 1, 10, seed=3)
    plan = PlanFactory.create_plan_strategy(plan_name).make_plan(tag, 2, 2)
    L = build_structured(P, tag, 2, plan, strict=True).L
    assert len(L.provenance) == len(expected) == 5
    for s, row in enumerate(expected):
        for t, cell in enumerate(row):
            assert L.provenance[s][t] == cell, f"{caption} block ({s + 1},{t + 1}): {L.render_rows()[s][t]}"
    assert L.rescan()
    assert check_structure(L, tag)


def test_examduplic_odd_recovery_is_negated():
    tag, P = structured(StructureKind.ODD, 1, 10, seed=3)
    plan = PlanFactory.create_plan_strategy("examduplic-alternating").make_plan(tag, 2, 2)
    recovery = recover_P(build_structured(P, tag, 2, plan, strict=True))
    assert recovery.negated
    assert recovery.product.same_values(-P)
    assert recovery.polynomial.same_values(P)
