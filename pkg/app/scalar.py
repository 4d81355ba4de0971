########################
# Scalar Field         #
########################

"""
This module provides the scalar field every matrix polynomial is built on.

Key Features:
1. Three Backends:
   - rational: exact Fraction values
   - gaussian: exact Fraction pairs re + im·i, closed under conjugation
   - float: binary floating point pairs, only for sampling and sanity checks

2. Exact Arithmetic:
   - +, -, *, / and non-negative integer powers
   - Python int and Fraction operands are coerced to the backend of the Scalar
   - DivisionByZero on exact division by zero, BackendMismatch on mixed backends

3. Sympy Domains:
   - Backend.domain is QQ or QQ_I; to_domain() and from_domain() move values
     in and out of sympy ground elements for matrix and polynomial algebra

4. Text Form:
   - "p/q" for rationals, "p/q+r/si" for Gaussian rationals
   - parse_scalar() and str() are inverse on exact backends
"""

from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from numbers import Rational
import re
from typing import Union

from sympy.polys.domains import QQ, QQ_I

from app.exceptions import BackendMismatch, DivisionByZero, FloatBackendUnsupported, ParseError


class Backend(str, Enum):
    """Scalar backends."""
    RATIONAL = "rational"
    GAUSSIAN = "gaussian"
    FLOAT = "float"

    @property
    def exact(self) -> bool:
        return self is not Backend.FLOAT

    @property
    def domain(self):
        """
        The sympy ground domain of an exact backend.

        Raises:
            FloatBackendUnsupported: On the float backend.
        """
        if self is Backend.RATIONAL:
            return QQ
        if self is Backend.GAUSSIAN:
            return QQ_I
        raise FloatBackendUnsupported("The float backend has no exact sympy domain")


ScalarLike = Union["Scalar", int, Fraction]

_BACKEND_RANK = {Backend.RATIONAL: 0, Backend.GAUSSIAN: 1, Backend.FLOAT: 2}


def _fraction(value) -> Fraction:
    return Fraction(int(QQ.numer(value)), int(QQ.denom(value)))


def _part(value, backend: Backend):
    if backend is Backend.FLOAT:
        return float(value)
    return Fraction(value)


@dataclass(frozen=True, eq=False)
class Scalar:
    """
    An element of Q, Q(i) or (approximately) C.

    Attributes:
        re: Real part (Fraction for exact backends, float otherwise).
        im: Imaginary part, always zero for the rational backend.
        backend: Which field the value lives in.
    """
    re: Union[Fraction, float]
    im: Union[Fraction, float]
    backend: Backend

    # ------------------------------------------------------------------
    # Construction
    # ------------------------------------------------------------------

    @classmethod
    def of(cls, value, backend: Backend = Backend.GAUSSIAN) -> "Scalar":
        """
        Build a Scalar from an int, Fraction, float, complex or Scalar.

        Raises:
            BackendMismatch: If the value cannot live in the requested backend.
        """
        backend = Backend(backend)
        if isinstance(value, Scalar):
            return promote(value, backend)
        if isinstance(value, complex):
            if backend is Backend.FLOAT:
                return cls(value.real, value.imag, backend)
            raise BackendMismatch("complex floats cannot be used with an exact backend")
        if isinstance(value, float) and backend.exact:
            if not value.is_integer():
                raise BackendMismatch(f"float {value} cannot be used with an exact backend")
            value = int(value)
        if isinstance(value, (int, Rational, float)):
            return cls(_part(value, backend), _part(0, backend), backend)
        raise TypeError(f"Cannot build a Scalar from {type(value).__name__}")

    @classmethod
    def gaussian(cls, re_part, im_part) -> "Scalar":
        """Build an exact Gaussian rational re + im·i."""
        return cls(Fraction(re_part), Fraction(im_part), Backend.GAUSSIAN)

    @classmethod
    def zero(cls, backend: Backend = Backend.GAUSSIAN) -> "Scalar":
        return cls.of(0, backend)

    @classmethod
    def one(cls, backend: Backend = Backend.GAUSSIAN) -> "Scalar":
        return cls.of(1, backend)

    # ------------------------------------------------------------------
    # Predicates
    # ------------------------------------------------------------------

    def is_zero(self) -> bool:
        return self.re == 0 and self.im == 0

    def is_one(self) -> bool:
        return self.re == 1 and self.im == 0

    def is_real(self) -> bool:
        return self.im == 0

    # ------------------------------------------------------------------
    # Arithmetic
    # ------------------------------------------------------------------

    def _coerce(self, other) -> "Scalar":
        if isinstance(other, Scalar):
            if other.backend is not self.backend:
                raise BackendMismatch(
                    f"Cannot combine {self.backend.value} and {other.backend.value} scalars"
                )
            return other
        if isinstance(other, (int, Fraction)):
            return Scalar(_part(other, self.backend), _part(0, self.backend), self.backend)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return Scalar(self.re + other.re, self.im + other.im, self.backend)

    __radd__ = __add__

    def __neg__(self) -> "Scalar":
        return Scalar(-self.re, -self.im, self.backend)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return Scalar(self.re - other.re, self.im - other.im, self.backend)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return other - self

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return Scalar(
            self.re * other.re - self.im * other.im,
            self.re * other.im + self.im * other.re,
            self.backend,
        )

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        norm = other.re * other.re + other.im * other.im
        if norm == 0:
            raise DivisionByZero("Division by zero scalar")
        return Scalar(
            (self.re * other.re + self.im * other.im) / norm,
            (self.im * other.re - self.re * other.im) / norm,
            self.backend,
        )

    def __rtruediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return other / self

    def __pow__(self, exponent: int) -> "Scalar":
        if not isinstance(exponent, int) or exponent < 0:
            raise ValueError("Scalar powers must be non-negative integers")
        result = Scalar.one(self.backend)
        base = self
        while exponent:
            if exponent & 1:
                result = result * base
            base = base * base
            exponent >>= 1
        return result

    def conj(self) -> "Scalar":
        """Complex conjugate; the identity on the rational backend."""
        if self.backend is Backend.RATIONAL:
            return self
        return Scalar(self.re, -self.im, self.backend)

    # ------------------------------------------------------------------
    # Comparison and conversion
    # ------------------------------------------------------------------

    def __eq__(self, other) -> bool:
        if isinstance(other, Scalar):
            return self.re == other.re and self.im == other.im
        if isinstance(other, (int, Fraction, float)):
            return self.re == other and self.im == 0
        return NotImplemented

    def __hash__(self) -> int:
        return hash((self.re, self.im))

    def to_complex(self) -> complex:
        return complex(float(self.re), float(self.im))

    def to_domain(self):
        """This value as an element of backend.domain."""
        domain = self.backend.domain
        re_part = QQ(self.re.numerator, self.re.denominator)
        if domain is QQ:
            return re_part
        return QQ_I(re_part, QQ(self.im.numerator, self.im.denominator))

    @classmethod
    def from_domain(cls, value, backend: Backend) -> "Scalar":
        """Inverse of to_domain()."""
        backend = Backend(backend)
        if backend.domain is QQ:
            return cls(_fraction(value), Fraction(0), backend)
        return cls(_fraction(value.x), _fraction(value.y), backend)

    def __str__(self) -> str:
        if self.backend is Backend.FLOAT:
            if self.im == 0:
                return repr(float(self.re))
            return repr(self.to_complex()).strip("()").replace("j", "i")
        if self.im == 0:
            return str(self.re)
        imag = "" if abs(self.im) == 1 else str(abs(self.im))
        sign = "-" if self.im < 0 else "+"
        if self.re == 0:
            return f"{'-' if self.im < 0 else ''}{imag}i"
        return f"{self.re}{sign}{imag}i"

    def __repr__(self) -> str:
        return f"Scalar({self}, {self.backend.value})"


def promote(x: Scalar, backend: Backend) -> Scalar:
    """
    Embed x into a larger backend (rational into gaussian, exact into float).

    Raises:
        BackendMismatch: If the target is smaller, or x is non-real and the
            target is rational.
    """
    backend = Backend(backend)
    if x.backend is backend:
        return x
    if _BACKEND_RANK[backend] < _BACKEND_RANK[x.backend]:
        if backend is Backend.RATIONAL and x.backend is Backend.GAUSSIAN and x.im == 0:
            return Scalar(x.re, Fraction(0), backend)
        raise BackendMismatch(f"Cannot demote a {x.backend.value} scalar to {backend.value}")
    return Scalar(_part(x.re, backend), _part(x.im, backend), backend)


def scalar_arith(x: Scalar, y: Scalar, op: str) -> Scalar:
    """
    Apply one of + - * / to two scalars of the same backend.

    Raises:
        DivisionByZero: On exact division by zero.
        BackendMismatch: If the backends differ.
        ValueError: For an unknown operator.
    """
    if not isinstance(y, Scalar) or x.backend is not y.backend:
        other = getattr(y, "backend", type(y).__name__)
        raise BackendMismatch(f"Cannot combine {x.backend.value} with {other}")
    if op == '+':
        return x + y
    if op == '-':
        return x - y
    if op == '*':
        return x * y
    if op == '/':
        return x / y
    raise ValueError(f"Unknown scalar operator: {op}")


_GAUSSIAN_SPLIT = re.compile(r"(?<=[0-9/.])(?=[+-])")


def _parse_fraction(text: str, original: str) -> Fraction:
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError) as e:
        raise ParseError(f"Invalid scalar text: {original!r}") from e


def parse_scalar(text: str, backend: Backend = Backend.GAUSSIAN) -> Scalar:
    """
    Parse "p/q" or "p/q+r/si" (also "i", "-i", "2i") into a Scalar.

    Args:
        text (str): Scalar text.
        backend (Backend): Target backend.

    Returns:
        Scalar: Parsed value.

    Raises:
        ParseError: If the text is malformed or imaginary for the rational backend.
    """
    backend = Backend(backend)
    original = text
    if not isinstance(text, str):
        raise ParseError(f"Scalar text must be a string, got {type(text).__name__}")
    text = "".join(text.split())
    if not text:
        raise ParseError("Empty scalar text")
    if backend is Backend.FLOAT:
        try:
            value = complex(text.replace("i", "j"))
        except ValueError as e:
            raise ParseError(f"Invalid scalar text: {original!r}") from e
        return Scalar(value.real, value.imag, backend)
    if not text.endswith("i"):
        return Scalar(_parse_fraction(text, original), Fraction(0), backend)
    if backend is Backend.RATIONAL:
        raise ParseError(f"Imaginary scalar {original!r} is not rational")
    body = text[:-1]
    parts = _GAUSSIAN_SPLIT.split(body)
    if len(parts) == 1:
        real_text, imag_text = "0", parts[0]
    elif len(parts) == 2:
        real_text, imag_text = parts
    else:
        raise ParseError(f"Invalid scalar text: {original!r}")
    if imag_text in ("", "+"):
        imag_text = "1"
    elif imag_text == "-":
        imag_text = "-1"
    return Scalar(
        _parse_fraction(real_text, original),
        _parse_fraction(imag_text, original),
        backend,
    )
