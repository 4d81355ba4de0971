########################
# Möbius Transforms    #
########################

"""
This module implements Möbius transformations of matrix polynomials,

    M_A[P](λ) = Σ_j P_j (aλ + b)^j (cλ + d)^{k-j},   A = [[a, b], [c, d]],

always at the grade k of P.

Key Features:
1. Named Matrices:
   - A1 (identity), A2 = diag(-1, 1), A3 (swap) for the structure families
   - cayley+1 = [[1, 1], [-1, 1]] and cayley-1 = [[1, -1], [1, 1]]
   - Arbitrary nonsingular 2x2 matrices parsed from "a,b,c,d"

2. Transform:
   - mobius() on matrix polynomials, optional sign for M_A[±P]
   - mobius_sequence() applies the same linear map to any coefficient
     sequence (matrices or provenance expressions)
   - coefficient_map() exposes the map as a (k+1)x(k+1) matrix

3. Cayley Transforms:
   - cayley(P, +1) = (1-λ)^k P((1+λ)/(1-λ)), cayley(P, -1) = (1+λ)^k P((λ-1)/(λ+1))
"""

from dataclasses import dataclass
from math import comb
from typing import Callable, List, Optional, Sequence, TypeVar

from app.exceptions import ParseError, SingularMobiusMatrix
from app.matpoly import MatrixPolynomial
from app.matrix import Matrix
from app.scalar import Backend, Scalar, parse_scalar, promote

T = TypeVar("T")


@dataclass(frozen=True)
class MobiusMatrix:
    """A 2x2 matrix [[a, b], [c, d]] defining a Möbius transformation."""
    a: Scalar
    b: Scalar
    c: Scalar
    d: Scalar
    name: str = ""

    @classmethod
    def of(cls, a, b, c, d, backend: Backend = Backend.RATIONAL, name: str = "") -> "MobiusMatrix":
        return cls(*(Scalar.of(x, backend) for x in (a, b, c, d)), name=name)

    @classmethod
    def named(cls, name: str, backend: Backend = Backend.RATIONAL) -> "MobiusMatrix":
        """
        Raises:
            ParseError: For an unknown name.
        """
        key = name.strip().lower()
        if key not in NAMED_ENTRIES:
            raise ParseError(f"Unknown Möbius matrix: {name!r}")
        return cls.of(*NAMED_ENTRIES[key], backend=backend, name=key.upper() if key[0] == "a" else key)

    @classmethod
    def parse(cls, text: str, backend: Backend = Backend.GAUSSIAN) -> "MobiusMatrix":
        """Parse a named matrix or four comma separated scalars a,b,c,d."""
        key = text.strip().lower()
        if key in NAMED_ENTRIES:
            return cls.named(key, backend)
        parts = [p for p in text.split(",")]
        if len(parts) != 4:
            raise ParseError(f"Möbius matrix needs four entries, got {text!r}")
        return cls(*(parse_scalar(p, backend) for p in parts))

    @property
    def backend(self) -> Backend:
        return self.a.backend

    def entries(self) -> Sequence[Scalar]:
        return self.a, self.b, self.c, self.d

    def to(self, backend: Backend) -> "MobiusMatrix":
        return MobiusMatrix(*(promote(x, backend) for x in self.entries()), name=self.name)

    def as_matrix(self) -> Matrix:
        return Matrix(2, 2, ((self.a, self.b), (self.c, self.d)), self.backend)

    def det(self) -> Scalar:
        return self.a * self.d - self.b * self.c

    def conj(self) -> "MobiusMatrix":
        return MobiusMatrix(*(x.conj() for x in self.entries()))

    def __matmul__(self, other: "MobiusMatrix") -> "MobiusMatrix":
        return MobiusMatrix(
            self.a * other.a + self.b * other.c, self.a * other.b + self.b * other.d,
            self.c * other.a + self.d * other.c, self.c * other.b + self.d * other.d,
        )

    def scale(self, alpha) -> "MobiusMatrix":
        return MobiusMatrix(*(x * alpha for x in self.entries()))

    def inverse(self) -> "MobiusMatrix":
        det = self.det()
        if det.is_zero():
            raise SingularMobiusMatrix(f"Möbius matrix {self} is singular")
        return MobiusMatrix(self.d / det, -self.b / det, -self.c / det, self.a / det)

    def is_coninvolutory(self) -> bool:
        """A·conj(A) = I."""
        p = self @ self.conj()
        return p.a == 1 and p.b == 0 and p.c == 0 and p.d == 1

    def same_entries(self, other: "MobiusMatrix") -> bool:
        return all(x == y for x, y in zip(self.entries(), other.entries()))

    def coefficient_map(self, grade: int) -> Matrix:
        """
        T with M_A[P]_i = Σ_j T[j, i] P_j at the given grade.
        """
        backend = self.backend
        rows = []
        for j in range(grade + 1):
            row = []
            for i in range(grade + 1):
                acc = Scalar.zero(backend)
                for p in range(max(0, i - (grade - j)), min(j, i) + 1):
                    q = i - p
                    acc = acc + (self.a ** p) * (self.b ** (j - p)) * comb(j, p) \
                        * (self.c ** q) * (self.d ** (grade - j - q)) * comb(grade - j, q)
                row.append(acc)
            rows.append(tuple(row))
        return Matrix(grade + 1, grade + 1, tuple(rows), backend)

    def __str__(self) -> str:
        if self.name:
            return self.name
        return f"[[{self.a}, {self.b}], [{self.c}, {self.d}]]"


NAMED_ENTRIES = {
    "a1": (1, 0, 0, 1),
    "a2": (-1, 0, 0, 1),
    "a3": (0, 1, 1, 0),
    "cayley+1": (1, 1, -1, 1),
    "cayley-1": (1, -1, 1, 1),
}


def _checked(A: MobiusMatrix, backend: Backend) -> MobiusMatrix:
    if A.det().is_zero():
        raise SingularMobiusMatrix(f"Möbius matrix {A} is singular")
    return A.to(backend)


def mobius_sequence(coeffs: Sequence[T], A: MobiusMatrix, zero: T, sign: int = 1,
                    scale: Optional[Callable[[T, Scalar], T]] = None) -> List[T]:
    """
    Apply M_A to a coefficient sequence of any type supporting + and scalar *.

    Args:
        coeffs: P_0..P_k (grade k = len(coeffs) - 1).
        A: Möbius matrix, already in the right backend.
        zero: Additive identity of the coefficient type.
        sign: +1 or -1 for M_A[±P].
        scale: Optional custom scalar multiplication.

    Returns:
        List[T]: Coefficients of M_A[±P] at the same grade.
    """
    grade = len(coeffs) - 1
    table = A.coefficient_map(grade)
    mul = scale or (lambda x, alpha: x * alpha)
    out: List[T] = []
    for i in range(grade + 1):
        acc = zero
        for j, c in enumerate(coeffs):
            weight = table[j, i]
            if weight.is_zero():
                continue
            acc = acc + mul(c, weight * sign)
        out.append(acc)
    return out


def mobius(A: MobiusMatrix, P: MatrixPolynomial, sign: int = 1) -> MatrixPolynomial:
    """
    M_A[±P] at the grade of P.

    Raises:
        SingularMobiusMatrix: If det A = 0.
        BackendMismatch: If A has entries P's backend cannot hold.
    """
    A = _checked(A, P.backend)
    zero = Matrix.zeros(P.rows, P.cols, P.backend)
    coeffs = mobius_sequence(list(P.coeffs), A, zero, sign)
    return MatrixPolynomial(P.rows, P.cols, P.grade, tuple(coeffs), P.backend)


def cayley(P: MatrixPolynomial, which: int = 1) -> MatrixPolynomial:
    """
    Cayley transform C_{+1} or C_{-1} of P at its grade.
    """
    if which not in (1, -1):
        raise ValueError("Cayley transform index must be +1 or -1")
    name = "cayley+1" if which == 1 else "cayley-1"
    return mobius(MobiusMatrix.named(name, P.backend), P)
