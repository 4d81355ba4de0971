"""
tests/test_generators.py

Unit tests for the seeded test-polynomial generators in app/generators.py.
"""

import numpy as np
import pytest

from app.generators import (
    kernel_gadget,
    random_invertible,
    random_structured,
    singular_structured,
    structured_projection,
)
from app.matpoly import det_poly, random_matrix_polynomial
from app.matrix import StarFlavor
from app.scalar import Backend
from app.structures import StructureKind, StructureTag
from app.verification import check_structure, normal_rank

Q = Backend.RATIONAL


@pytest.mark.parametrize("kind", list(StructureKind))
@pytest.mark.parametrize("flavor", ["T", "H"])
def test_projection_is_structured(kind, flavor):
    tag = StructureTag(kind, StarFlavor.parse(flavor))
    X = random_matrix_polynomial(np.random.default_rng(3), 3, 3, 4, Backend.GAUSSIAN)
    assert check_structure(structured_projection(X, tag), tag)


def test_projection_fixes_structured_input():
    tag = StructureTag(StructureKind.EVEN)
    P = random_structured(np.random.default_rng(1), tag, 2, 3, Q)
    assert structured_projection(P, tag).same_values(P)


def test_generators_are_reproducible():
    tag = StructureTag(StructureKind.PALINDROMIC)
    first = random_structured(np.random.default_rng(42), tag, 2, 4, Q)
    second = random_structured(np.random.default_rng(42), tag, 2, 4, Q)
    assert first.same_values(second)


def test_random_invertible_has_unit_determinant():
    X = random_invertible(np.random.default_rng(5), 4, Q)
    assert X.det() == 1


@pytest.mark.parametrize("epsilon", [1, 2])
def test_kernel_gadget_is_singular_and_structured(epsilon):
    tag = StructureTag(StructureKind.ODD)
    G = kernel_gadget(tag, epsilon, 2, Q)
    assert G.shape == (2 * epsilon + 1, 2 * epsilon + 1)
    assert check_structure(G, tag)
    assert normal_rank(G) == 2 * epsilon


def test_kernel_gadget_for_zero_epsilon():
    G = kernel_gadget(StructureTag(StructureKind.SYMMETRIC), 0, 3, Q)
    assert G.shape == (1, 1)
    assert G.is_zero()


@pytest.mark.parametrize("kind", [StructureKind.SYMMETRIC, StructureKind.PALINDROMIC, StructureKind.EVEN])
def test_singular_structured(kind):
    tag = StructureTag(kind)
    instance = singular_structured(np.random.default_rng(0), tag, 2, [1, 0], backend=Q)
    assert instance.P.shape == (5, 5)
    assert check_structure(instance.P, tag)
    assert det_poly(instance.P).is_zero()
    assert instance.right_indices == [0, 2]
    assert instance.left_indices == instance.right_indices
