########################
# Scalar Polynomials   #
########################

"""
Univariate polynomials in λ over a scalar backend.

Used for determinants, Smith forms, gcds of maximal minors and the entries of
matrix polynomials when they are treated as matrices over F[λ].

Key Features:
1. Exact Backends:
   - arithmetic, division with remainder and gcds run in sympy's sparse
     polynomial rings QQ[λ] and QQ_I[λ]
   - to_ring() and from_ring() cross between the two representations

2. Float Backend:
   - sums, products and evaluation through numpy.polynomial; division and
     gcds are refused
"""

from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Sequence, Tuple

import numpy as np
from numpy.polynomial import polynomial as npoly
from sympy import Symbol

from app.exceptions import DivisionByZero, FloatBackendUnsupported
from app.scalar import Backend, Scalar, promote

SUPERSCRIPTS = str.maketrans("0123456789", "⁰¹²³⁴⁵⁶⁷⁸⁹")

LAMBDA = Symbol("λ")


@lru_cache(maxsize=None)
def polynomial_domain(backend: Backend):
    """QQ[λ] or QQ_I[λ] as a sympy domain; its .ring holds the elements."""
    return Backend(backend).domain[LAMBDA]


def _trim(coeffs: Sequence[Scalar]) -> Tuple[Scalar, ...]:
    end = len(coeffs)
    while end > 0 and coeffs[end - 1].is_zero():
        end -= 1
    return tuple(coeffs[:end])


@dataclass(frozen=True)
class ScalarPolynomial:
    """
    A polynomial Σ c_i λ^i with trailing zeros removed.

    The zero polynomial has an empty coefficient tuple and degree -1.
    """
    coeffs: Tuple[Scalar, ...]
    backend: Backend

    @classmethod
    def from_coeffs(cls, coeffs: Iterable, backend: Backend) -> "ScalarPolynomial":
        return cls(_trim([Scalar.of(c, backend) for c in coeffs]), Backend(backend))

    @classmethod
    def zero(cls, backend: Backend) -> "ScalarPolynomial":
        return cls((), Backend(backend))

    @classmethod
    def constant(cls, value, backend: Backend) -> "ScalarPolynomial":
        return cls.from_coeffs([value], backend)

    @classmethod
    def monomial(cls, power: int, value, backend: Backend) -> "ScalarPolynomial":
        zero = Scalar.zero(backend)
        return cls.from_coeffs([zero] * power + [Scalar.of(value, backend)], backend)

    # ------------------------------------------------------------------
    # Conversions
    # ------------------------------------------------------------------

    def to_ring(self):
        """
        This polynomial as an element of polynomial_domain(backend).ring.

        Raises:
            FloatBackendUnsupported: On the float backend.
        """
        ring = polynomial_domain(self.backend).ring
        return ring.from_dict({(i,): c.to_domain() for i, c in enumerate(self.coeffs) if not c.is_zero()})

    @classmethod
    def from_ring(cls, element, backend: Backend) -> "ScalarPolynomial":
        backend = Backend(backend)
        if not element:
            return cls.zero(backend)
        coeffs = [Scalar.zero(backend)] * (element.degree() + 1)
        for (i,), c in element.items():
            coeffs[i] = Scalar.from_domain(c, backend)
        return cls(_trim(coeffs), backend)

    def to_numpy(self) -> np.ndarray:
        """Coefficients in increasing degree as a complex array."""
        return np.array([c.to_complex() for c in self.coeffs] or [0j], dtype=complex)

    @classmethod
    def from_numpy(cls, values: np.ndarray, backend: Backend) -> "ScalarPolynomial":
        return cls.from_coeffs([complex(v) for v in values], backend)

    def promoted(self, backend: Backend) -> "ScalarPolynomial":
        backend = Backend(backend)
        if backend is self.backend:
            return self
        return ScalarPolynomial(tuple(promote(c, backend) for c in self.coeffs), backend)

    # ------------------------------------------------------------------
    # Access
    # ------------------------------------------------------------------

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    def is_constant(self) -> bool:
        return len(self.coeffs) <= 1

    def coefficient(self, i: int) -> Scalar:
        if 0 <= i < len(self.coeffs):
            return self.coeffs[i]
        return Scalar.zero(self.backend)

    @property
    def leading(self) -> Scalar:
        if not self.coeffs:
            return Scalar.zero(self.backend)
        return self.coeffs[-1]

    # ------------------------------------------------------------------
    # Arithmetic
    # ------------------------------------------------------------------

    def _combine(self, other: "ScalarPolynomial", exact, floating) -> "ScalarPolynomial":
        other = other.promoted(self.backend)
        if self.backend.exact:
            return ScalarPolynomial.from_ring(exact(self.to_ring(), other.to_ring()), self.backend)
        return ScalarPolynomial.from_numpy(floating(self.to_numpy(), other.to_numpy()), self.backend)

    def __add__(self, other: "ScalarPolynomial") -> "ScalarPolynomial":
        return self._combine(other, lambda a, b: a + b, npoly.polyadd)

    def __neg__(self) -> "ScalarPolynomial":
        return ScalarPolynomial(tuple(-c for c in self.coeffs), self.backend)

    def __sub__(self, other: "ScalarPolynomial") -> "ScalarPolynomial":
        return self._combine(other, lambda a, b: a - b, npoly.polysub)

    def __mul__(self, other) -> "ScalarPolynomial":
        if isinstance(other, ScalarPolynomial):
            if self.is_zero() or other.is_zero():
                return ScalarPolynomial.zero(self.backend)
            return self._combine(other, lambda a, b: a * b, npoly.polymul)
        return self.scale(other)

    __rmul__ = __mul__

    def scale(self, alpha) -> "ScalarPolynomial":
        alpha = Scalar.of(alpha, self.backend)
        if not self.backend.exact:
            return ScalarPolynomial.from_numpy(self.to_numpy() * alpha.to_complex(), self.backend)
        return ScalarPolynomial.from_ring(self.to_ring().mul_ground(alpha.to_domain()), self.backend)

    def __call__(self, x) -> Scalar:
        x = Scalar.of(x, self.backend)
        if not self.backend.exact:
            return Scalar.of(complex(npoly.polyval(x.to_complex(), self.to_numpy())), self.backend)
        return Scalar.from_domain(self.to_ring()(x.to_domain()), self.backend)

    def divmod(self, other: "ScalarPolynomial") -> Tuple["ScalarPolynomial", "ScalarPolynomial"]:
        """
        Division with remainder.

        Raises:
            DivisionByZero: If other is the zero polynomial.
            FloatBackendUnsupported: On the float backend.
        """
        if other.is_zero():
            raise DivisionByZero("Polynomial division by zero")
        if not self.backend.exact:
            raise FloatBackendUnsupported("Polynomial division needs an exact backend")
        q, r = divmod(self.to_ring(), other.promoted(self.backend).to_ring())
        return ScalarPolynomial.from_ring(q, self.backend), ScalarPolynomial.from_ring(r, self.backend)

    def __floordiv__(self, other: "ScalarPolynomial") -> "ScalarPolynomial":
        return self.divmod(other)[0]

    def __mod__(self, other: "ScalarPolynomial") -> "ScalarPolynomial":
        return self.divmod(other)[1]

    def monic(self) -> "ScalarPolynomial":
        if self.is_zero():
            return self
        return self.scale(Scalar.one(self.backend) / self.leading)

    def conj(self) -> "ScalarPolynomial":
        return ScalarPolynomial(tuple(c.conj() for c in self.coeffs), self.backend)

    def __eq__(self, other) -> bool:
        if not isinstance(other, ScalarPolynomial):
            return NotImplemented
        return self.coeffs == other.coeffs

    def __hash__(self) -> int:
        return hash(self.coeffs)

    def __str__(self) -> str:
        if self.is_zero():
            return "0"
        terms = []
        for i, c in enumerate(self.coeffs):
            if c.is_zero():
                continue
            power = "" if i == 0 else ("λ" if i == 1 else f"λ{str(i).translate(SUPERSCRIPTS)}")
            text = str(c)
            if power and text == "1":
                text = ""
            elif power and text == "-1":
                text = "-"
            elif power and not c.is_real() and c.re != 0:
                text = f"({text})"
            terms.append(f"{text}{power}")
        return "+".join(terms).replace("+-", "-")


def poly_gcd(a: ScalarPolynomial, b: ScalarPolynomial) -> ScalarPolynomial:
    """
    Monic gcd; gcd(0, 0) = 0.

    Raises:
        FloatBackendUnsupported: On the float backend.
    """
    if not a.backend.exact:
        raise FloatBackendUnsupported("Polynomial gcds need an exact backend")
    g = a.to_ring().gcd(b.promoted(a.backend).to_ring())
    return ScalarPolynomial.from_ring(g, a.backend).monic()

