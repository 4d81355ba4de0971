########################
# Multivariate Algebra #
########################

"""
Exact multivariate polynomials over Q(i) on top of sympy's sparse rings.

Key Features:
1. Sparse Representation:
   - a MultiPoly wraps an element of QQ_I[x0, ..., x{n-1}]
   - +, -, * between polynomials, Scalars and ints; terms exposes the
     nonzero coefficients as Scalars keyed by exponent tuples

2. Conjugation:
   - conjugate() conjugates coefficients and swaps every variable with its
     declared conjugate partner, so z and z̄ are independent variables and
     identities in (z, z̄) are identities over the reals

3. Fingerprints:
   - evaluate_mod() maps the polynomial into GF(p)[x0, ...] with
     p ≡ 1 (mod 4), sending i to a square root of -1, and evaluates there;
     equal polynomials always have equal fingerprints
"""

from fractions import Fraction
from functools import lru_cache
from typing import Dict, Iterable, Optional, Sequence, Tuple

from sympy.polys.domains import GF, QQ_I
from sympy.polys.rings import PolyRing

from app.scalar import Backend, Scalar, promote

Exponents = Tuple[int, ...]

PRIME = 998244353
FINGERPRINT_FIELD = GF(PRIME, symmetric=False)
# 3 generates the multiplicative group of GF(PRIME), so this squares to -1.
IMAGINARY_UNIT = int(FINGERPRINT_FIELD(3) ** ((PRIME - 1) // 4))


def _field(prime: int):
    return FINGERPRINT_FIELD if prime == PRIME else GF(prime, symmetric=False)


@lru_cache(maxsize=None)
def multivariate_ring(nvars: int, prime: Optional[int] = None) -> PolyRing:
    """QQ_I[x0, ..., x{nvars-1}], or GF(prime)[...] for fingerprints."""
    domain = QQ_I if prime is None else _field(prime)
    return PolyRing(",".join(f"x{k}" for k in range(nvars)), domain)


def fraction_mod(value: Fraction, prime: int = PRIME) -> int:
    """Image of a rational number in GF(prime)."""
    value = Fraction(value)
    field = _field(prime)
    return int(field(value.numerator) / field(value.denominator)) % prime


def scalar_mod(x: Scalar, prime: int = PRIME, imaginary_unit: int = IMAGINARY_UNIT) -> int:
    """Image of an exact Scalar in GF(prime)."""
    return (fraction_mod(x.re, prime) + fraction_mod(x.im, prime) * imaginary_unit) % prime


def _as_scalar(value) -> Scalar:
    if isinstance(value, Scalar):
        return promote(value, Backend.GAUSSIAN)
    return Scalar.of(value, Backend.GAUSSIAN)


class MultiPoly:
    """
    A polynomial in nvars commuting variables with Gaussian-rational coefficients.

    Attributes:
        nvars: Number of variables.
        poly: The underlying element of multivariate_ring(nvars).
    """

    __slots__ = ("nvars", "poly")

    def __init__(self, nvars: int, terms: Optional[Dict[Exponents, Scalar]] = None):
        self.nvars = nvars
        coefficients = {}
        for exps, c in (terms or {}).items():
            if len(exps) != nvars:
                raise ValueError(f"Exponent tuple {exps} does not have {nvars} entries")
            coefficients[tuple(exps)] = _as_scalar(c).to_domain()
        self.poly = multivariate_ring(nvars).from_dict(coefficients)

    @classmethod
    def _wrap(cls, nvars: int, poly) -> "MultiPoly":
        result = cls.__new__(cls)
        result.nvars = nvars
        result.poly = poly
        return result

    # ------------------------------------------------------------------
    # Construction
    # ------------------------------------------------------------------

    @classmethod
    def zero(cls, nvars: int) -> "MultiPoly":
        return cls(nvars)

    @classmethod
    def constant(cls, value, nvars: int) -> "MultiPoly":
        return cls(nvars, {(0,) * nvars: _as_scalar(value)})

    @classmethod
    def variable(cls, index: int, nvars: int, coefficient=1) -> "MultiPoly":
        exps = tuple(1 if k == index else 0 for k in range(nvars))
        return cls(nvars, {exps: _as_scalar(coefficient)})

    @property
    def terms(self) -> Dict[Exponents, Scalar]:
        return {e: Scalar.from_domain(c, Backend.GAUSSIAN) for e, c in self.poly.items()}

    # ------------------------------------------------------------------
    # Predicates
    # ------------------------------------------------------------------

    def is_zero(self) -> bool:
        return not self.poly

    def is_constant(self) -> bool:
        return all(sum(e) == 0 for e in self.poly.keys())

    @property
    def total_degree(self) -> int:
        return max((sum(e) for e in self.poly.keys()), default=-1)

    def degree_in(self, index: int) -> int:
        return max((e[index] for e in self.poly.keys()), default=-1)

    def constant_term(self) -> Scalar:
        return Scalar.from_domain(self.poly.get((0,) * self.nvars, QQ_I.zero), Backend.GAUSSIAN)

    # ------------------------------------------------------------------
    # Arithmetic
    # ------------------------------------------------------------------

    def _lift(self, other) -> "MultiPoly":
        if isinstance(other, MultiPoly):
            if other.nvars != self.nvars:
                raise ValueError(f"Cannot combine polynomials in {self.nvars} and {other.nvars} variables")
            return other
        return MultiPoly.constant(other, self.nvars)

    def __add__(self, other) -> "MultiPoly":
        return MultiPoly._wrap(self.nvars, self.poly + self._lift(other).poly)

    __radd__ = __add__

    def __neg__(self) -> "MultiPoly":
        return MultiPoly._wrap(self.nvars, -self.poly)

    def __sub__(self, other) -> "MultiPoly":
        return MultiPoly._wrap(self.nvars, self.poly - self._lift(other).poly)

    def __rsub__(self, other) -> "MultiPoly":
        return self._lift(other) - self

    def __mul__(self, other) -> "MultiPoly":
        if not isinstance(other, MultiPoly):
            return MultiPoly._wrap(self.nvars, self.poly.mul_ground(_as_scalar(other).to_domain()))
        return MultiPoly._wrap(self.nvars, self.poly * self._lift(other).poly)

    __rmul__ = __mul__

    def __truediv__(self, other) -> "MultiPoly":
        return MultiPoly._wrap(self.nvars, self.poly.quo_ground(_as_scalar(other).to_domain()))

    def conjugate(self, partner: Sequence[int]) -> "MultiPoly":
        """Conjugate coefficients and replace variable k by variable partner[k]."""
        terms = {}
        for e, c in self.poly.items():
            swapped = [0] * self.nvars
            for k, power in enumerate(e):
                swapped[partner[k]] += power
            terms[tuple(swapped)] = QQ_I(c.x, -c.y)
        return MultiPoly._wrap(self.nvars, multivariate_ring(self.nvars).from_dict(terms))

    def ratio_to(self, other: "MultiPoly") -> Optional[Scalar]:
        """c with self = c·other, or None; other must be nonzero."""
        if other.is_zero():
            raise ValueError("ratio_to needs a nonzero polynomial")
        exps, lead = next(iter(other.poly.items()))
        c = self.poly.get(exps, QQ_I.zero) / lead
        if self.poly != other.poly.mul_ground(c):
            return None
        return Scalar.from_domain(c, Backend.GAUSSIAN)

    # ------------------------------------------------------------------
    # Evaluation
    # ------------------------------------------------------------------

    def evaluate(self, values: Sequence) -> Scalar:
        if self.nvars == 0:
            return self.constant_term()
        point = [_as_scalar(v).to_domain() for v in list(values)[:self.nvars]]
        return Scalar.from_domain(self.poly(*point), Backend.GAUSSIAN)

    def evaluate_mod(self, point: Sequence[int], prime: int = PRIME,
                     imaginary_unit: int = IMAGINARY_UNIT) -> int:
        ring = multivariate_ring(self.nvars, prime)
        image = ring.from_dict({
            e: scalar_mod(Scalar.from_domain(c, Backend.GAUSSIAN), prime, imaginary_unit)
            for e, c in self.poly.items()
        })
        if self.nvars == 0:
            return int(image.get((), ring.domain.zero)) % prime
        return int(image(*[int(v) for v in list(point)[:self.nvars]])) % prime

    # ------------------------------------------------------------------
    # Comparison and rendering
    # ------------------------------------------------------------------

    def __eq__(self, other) -> bool:
        if isinstance(other, MultiPoly):
            return self.nvars == other.nvars and self.poly == other.poly
        if isinstance(other, (int, Fraction, Scalar)):
            return self == MultiPoly.constant(other, self.nvars)
        return NotImplemented

    __hash__ = None

    def render(self, names: Sequence[str]) -> str:
        terms = self.terms
        if not terms:
            return "0"
        pieces = []
        for e in sorted(terms, key=lambda x: (-sum(x), tuple(-p for p in x))):
            c = terms[e]
            monomial = "*".join(
                names[k] if p == 1 else f"{names[k]}^{p}" for k, p in enumerate(e) if p
            )
            if not monomial:
                pieces.append(f"({c})" if not c.is_real() else str(c))
            elif c.is_one():
                pieces.append(monomial)
            elif c == -1:
                pieces.append(f"-{monomial}")
            elif c.is_real():
                pieces.append(f"{c}*{monomial}")
            else:
                pieces.append(f"({c})*{monomial}")
        return " + ".join(pieces).replace("+ -", "- ")

    def __str__(self) -> str:
        return self.render([f"x{k}" for k in range(self.nvars)])

    def __repr__(self) -> str:
        return f"MultiPoly({self})"


def poly_sum(polys: Iterable[MultiPoly], nvars: int) -> MultiPoly:
    total = MultiPoly.zero(nvars)
    for p in polys:
        total = total + p
    return total
