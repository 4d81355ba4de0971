########################
# Demo Scenarios       #
########################

"""
This module defines the demo scenarios behind the `demo` subcommand and the
DemoFactory that creates them by name, following the Strategy and Factory
design patterns used for placement plans.

Key Features:
1. DemoScenario Base Class:
   - run(rng, size_cap) builds lifications, certifies them and returns a
     DemoOutcome with named checks and rendered block layouts

2. Concrete Scenarios:
   - examduplic: the three grade-10 quadratifications (symmetric, odd,
     palindromic) of the duplication example
   - sparse: the grade-14 palindromic quadratification with 19 nonzero
     blocks, next to the symmetric floor found by the support search
   - invmatrices: the grade-21 symmetric cubification whose Kronecker arm
     carries invertible blocks
   - quartic: the palindromic quadratification of a quartic that is
     generalized companion but not companion
   - cayley: a palindromic quadratification carried to an even one by the
     Cayley transform

3. Factory Pattern:
   - DemoFactory.create_demo(name) with dynamic registration
   - unknown names raise ValueError
"""

from abc import ABC, abstractmethod
from dataclasses import dataclass, field
import logging
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from app.block_polynomial import BlockPolynomial
from app.conditions import build_M, split_grade
from app.engine import (
    build_structured,
    cayley_image,
    invertible_arm,
    palindromic_quartic_quadratification,
    recover_P,
    structured_bmb,
)
from app.generators import random_invertible, random_structured
from app.lification_config import DEFAULT_SMITH_SIZE_CAP
from app.matpoly import MatrixPolynomial
from app.matrix import Matrix, StarFlavor
from app.minimal_bases import build_Lambda
from app.mobius import cayley
from app.plans import PlanFactory, sparse_support_search
from app.quartic_refuter import check_template, generalized_palindromic_template
from app.scalar import Backend
from app.structures import StructureKind, StructureTag
from app.verification import certify_lification, check_structure, companion_predicate, sparsity_census


@dataclass
class DemoOutcome:
    """
    What a demo built and whether every claim it checked holds.

    Attributes:
        name: Demo name.
        title: One line description.
        checks: Claim text mapped to whether it held.
        renders: (caption, block layout) pairs for display.
        census: Nonzero block counts by caption.
    """
    name: str
    title: str
    checks: Dict[str, bool] = field(default_factory=dict)
    renders: List[Tuple[str, str]] = field(default_factory=list)
    census: Dict[str, int] = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return all(self.checks.values())

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "title": self.title,
            "passed": self.passed,
            "checks": dict(self.checks),
            "census": dict(self.census),
            "renders": [{"caption": c, "layout": text} for c, text in self.renders],
        }


class DemoScenario(ABC):
    """
    Abstract base class for demo scenarios.

    Subclasses set NAME, TITLE and DESCRIPTION and implement run().
    """

    NAME = ""
    TITLE = ""
    DESCRIPTION = ""

    @abstractmethod
    def run(self, rng: np.random.Generator, size_cap: int = DEFAULT_SMITH_SIZE_CAP) -> DemoOutcome:
        """
        Build, certify and render the scenario.

        Args:
            rng: Seeded generator for the random polynomials.
            size_cap: Size cap forwarded to Smith form computations.

        Returns:
            DemoOutcome: Checks and renders.
        """
        pass  # pragma: no cover

    def outcome(self) -> DemoOutcome:
        return DemoOutcome(self.NAME, self.TITLE)

    @staticmethod
    def certify(outcome: DemoOutcome, caption: str, L: BlockPolynomial, P: MatrixPolynomial, ell: int,
                structures: Sequence[StructureTag], size_cap: int) -> None:
        report = certify_lification(L, P, ell, size_cap=size_cap, structures=structures)
        outcome.checks[f"{caption} is a strong {ell}-ification"] = report.is_strong
        for tag in structures:
            outcome.checks[f"{caption} is {tag}"] = report.structure_checks[str(tag)]
        outcome.census[caption] = L.census()
        outcome.renders.append((caption, L.render()))

    def __str__(self) -> str:
        return self.NAME


class ExamDuplicDemo(DemoScenario):
    NAME = "examduplic"
    TITLE = "Three structured quadratifications of a grade-10 polynomial"
    DESCRIPTION = "Symmetric, odd and palindromic grade-10 quadratifications with ½ multipliers"

    CASES = (
        ("L_S", StructureKind.SYMMETRIC, "examduplic"),
        ("L_O", StructureKind.ODD, "examduplic-alternating"),
        ("L_P", StructureKind.PALINDROMIC, "examduplic"),
    )

    def __init__(self, n: int = 1):
        self.n = n

    def run(self, rng: np.random.Generator, size_cap: int = DEFAULT_SMITH_SIZE_CAP) -> DemoOutcome:
        outcome = self.outcome()
        for caption, kind, plan_name in self.CASES:
            tag = StructureTag(kind)
            P = random_structured(rng, tag, self.n, 10, Backend.RATIONAL)
            plan = PlanFactory.create_plan_strategy(plan_name).make_plan(tag, 2, 2)
            result = build_structured(P, tag, 2, plan, strict=True)
            self.certify(outcome, caption, result.L, P, 2, [tag], size_cap)
            outcome.checks[f"{caption} recovers P"] = recover_P(result).polynomial.same_values(P)
        return outcome


class SparseDemo(DemoScenario):
    NAME = "sparse"
    TITLE = "Sparse grade-14 quadratifications"
    DESCRIPTION = "Palindromic quadratification with 6d+1 = 19 blocks; symmetric ones need 7d+1 = 22"

    def __init__(self, n: int = 1):
        self.n = n

    def run(self, rng: np.random.Generator, size_cap: int = DEFAULT_SMITH_SIZE_CAP) -> DemoOutcome:
        outcome = self.outcome()
        tag = StructureTag(StructureKind.PALINDROMIC)
        grade, ell = 14, 2
        d = split_grade(grade, ell)
        P = random_structured(rng, tag, self.n, grade, Backend.RATIONAL)
        plan = PlanFactory.create_plan_strategy("sparse-example").make_plan(tag, d, ell)
        result = build_structured(P, tag, ell, plan, strict=True)
        caption = f"{tag} sparse L"
        self.certify(outcome, caption, result.L, P, ell, [tag], size_cap)
        report = sparsity_census(result.L, d, ell, result.condition)
        outcome.checks[f"{caption} has {report.sparse_bound} blocks"] = report.is_sparse
        symmetric = sparse_support_search(StructureTag(StructureKind.SYMMETRIC), d, ell)
        outcome.census["symmetric support search"] = symmetric.census
        outcome.checks[f"symmetric search cannot beat {7 * d + 1} blocks"] = symmetric.census == 7 * d + 1
        return outcome


class InvMatricesDemo(DemoScenario):
    NAME = "invmatrices"
    TITLE = "Grade-21 symmetric cubification with invertible arm blocks"
    DESCRIPTION = "Block minimal bases cubification whose Kronecker arm rows are scaled by invertible matrices"

    MULTIPLIERS = (2, -1, 3)

    def __init__(self, n: int = 1):
        self.n = n

    def run(self, rng: np.random.Generator, size_cap: int = DEFAULT_SMITH_SIZE_CAP) -> DemoOutcome:
        outcome = self.outcome()
        tag = StructureTag(StructureKind.SYMMETRIC)
        grade, ell = 21, 3
        d = split_grade(grade, ell)
        backend = Backend.RATIONAL
        P = random_structured(rng, tag, self.n, grade, backend)
        plan = PlanFactory.create_plan_strategy("cubification").make_plan(tag, d, ell)
        M = build_M(P, plan)
        invertibles: List[Matrix] = [random_invertible(rng, self.n, backend) * alpha for alpha in self.MULTIPLIERS]
        K1 = invertible_arm(invertibles, d, ell, self.n)
        N1 = build_Lambda(d, ell, backend).transpose().kron_identity(self.n)
        result = structured_bmb(M, K1, N1, tag, grade)
        self.certify(outcome, "cubification L", result.L, P, ell, [tag], size_cap)
        outcome.checks["cubification L recovers P"] = recover_P(result).polynomial.same_values(P)
        return outcome


class QuarticDemo(DemoScenario):
    NAME = "quartic"
    TITLE = "Palindromic quadratification of a quartic"
    DESCRIPTION = "Generalized companion but not companion quadratification of a ⋆-palindromic quartic"

    def __init__(self, n: int = 1, flavor: StarFlavor = StarFlavor.CONJUGATE_TRANSPOSE):
        self.n = n
        self.flavor = StarFlavor.parse(flavor)

    def run(self, rng: np.random.Generator, size_cap: int = DEFAULT_SMITH_SIZE_CAP) -> DemoOutcome:
        outcome = self.outcome()
        tag = StructureTag(StructureKind.PALINDROMIC, self.flavor)
        P = random_structured(rng, tag, self.n, 4, Backend.GAUSSIAN)
        L = palindromic_quartic_quadratification(P)
        caption = f"{tag} quadratification"
        self.certify(outcome, caption, L, P, 2, [tag], size_cap)
        outcome.checks[f"{caption} is generalized companion"] = companion_predicate(L, "generalized")
        outcome.checks[f"{caption} is not companion"] = not companion_predicate(L, "companion")
        outcome.checks["scalar template satisfies det L = αp"] = check_template(generalized_palindromic_template(tag))
        return outcome


class CayleyDemo(DemoScenario):
    NAME = "cayley"
    TITLE = "Cayley transform of a palindromic quadratification"
    DESCRIPTION = "C_{+1} maps a ⋆-palindromic quadratification to a ⋆-even one of C_{+1}(P)"

    def __init__(self, n: int = 1, grade: int = 6):
        self.n = n
        self.grade = grade

    def run(self, rng: np.random.Generator, size_cap: int = DEFAULT_SMITH_SIZE_CAP) -> DemoOutcome:
        outcome = self.outcome()
        palindromic = StructureTag(StructureKind.PALINDROMIC)
        even = StructureTag(StructureKind.EVEN)
        ell = 2
        P = random_structured(rng, palindromic, self.n, self.grade, Backend.RATIONAL)
        result = build_structured(P, palindromic, ell, strict=True)
        self.certify(outcome, "palindromic L", result.L, P, ell, [palindromic], size_cap)
        Q = cayley(P, 1)
        image = cayley_image(result.L, P, 1)
        outcome.checks["C(P) is T-even"] = check_structure(Q, even)
        outcome.checks["C(L) provenance matches its coefficients"] = image.rescan()
        self.certify(outcome, "C(L)", image, Q, ell, [even], size_cap)
        return outcome


class DemoFactory:
    """
    Factory class for creating demo scenarios by name.
    """

    _demos: Dict[str, type] = {
        'examduplic': ExamDuplicDemo,
        'sparse': SparseDemo,
        'invmatrices': InvMatricesDemo,
        'quartic': QuarticDemo,
        'cayley': CayleyDemo,
    }

    @classmethod
    def register_demo(cls, name: str, demo_class: type) -> None:
        """
        Register a new demo scenario.

        Raises:
            TypeError: If demo_class does not inherit from DemoScenario.
        """
        if not issubclass(demo_class, DemoScenario):
            raise TypeError("Demo class must inherit from DemoScenario")
        cls._demos[name.lower()] = demo_class

    @classmethod
    def create_demo(cls, name: str, **kwargs) -> DemoScenario:
        """
        Raises:
            ValueError: If the name is unknown.
        """
        demo_class = cls._demos.get(name.lower())
        if not demo_class:
            raise ValueError(f"Unknown demo: {name}")
        return demo_class(**kwargs)

    @classmethod
    def names(cls) -> List[str]:
        return list(cls._demos)


def run_demo(name: str, seed: int = 0, size_cap: int = DEFAULT_SMITH_SIZE_CAP,
             n: Optional[int] = None) -> DemoOutcome:
    """Run a named demo with a seeded generator."""
    demo = DemoFactory.create_demo(name, **({} if n is None else {"n": n}))
    outcome = demo.run(np.random.default_rng(seed), size_cap)
    logging.info(f"Demo {name} (seed {seed}): {'passed' if outcome.passed else 'FAILED'}")
    return outcome
