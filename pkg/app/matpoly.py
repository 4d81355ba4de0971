########################
# Matrix Polynomials   #
########################

"""
This module implements matrix polynomials P(λ) = Σ_{j=0}^{k} P_j λ^j with an
explicit grade k, which may exceed the actual degree.

Key Features:
1. Construction:
   - From coefficient matrices, from entry polynomials, zero and identity
   - Grade checks: GradeTooSmall when a grade is below the degree

2. Algebra:
   - Sum, scaling, product at a chosen grade, Kronecker product with I_n
   - Substitution λ ↦ λ^ℓ
   - Reversal rev_g P(λ) = λ^g P(1/λ) and the ⋆ involution (T or H)

3. Evaluation and Determinants:
   - Evaluation at a scalar (Horner)
   - to_domain_matrix() over sympy QQ[λ] or QQ_I[λ]; det_poly through it

4. Block Access:
   - Extract or replace the (s,t) block of a partitioned polynomial
"""

from dataclasses import dataclass
from typing import List, Optional, Sequence, Tuple

import numpy as np
from sympy.polys.matrices import DomainMatrix

from app.exceptions import (
    DimensionMismatch,
    FloatBackendUnsupported,
    GradeTooSmall,
    ShapeMismatch,
)
from app.matrix import Matrix, StarFlavor
from app.polynomial import ScalarPolynomial, polynomial_domain
from app.scalar import Backend, Scalar


@dataclass(frozen=True)
class MatrixPolynomial:
    """
    An m×n matrix polynomial of grade k.

    Attributes:
        rows: Number of rows m.
        cols: Number of columns n.
        grade: Declared grade k ≥ degree.
        coeffs: k+1 constant coefficients P_0..P_k.
        backend: Scalar backend shared by all coefficients.
    """
    rows: int
    cols: int
    grade: int
    coeffs: Tuple[Matrix, ...]
    backend: Backend

    # ------------------------------------------------------------------
    # Construction
    # ------------------------------------------------------------------

    @classmethod
    def from_coeffs(cls, coeffs: Sequence[Matrix], grade: Optional[int] = None) -> "MatrixPolynomial":
        """
        Build from a list of equally shaped coefficient matrices.

        Raises:
            ShapeMismatch: If the coefficients have different shapes or backends.
            GradeTooSmall: If grade is below the index of the last nonzero coefficient.
        """
        if not coeffs:
            raise ShapeMismatch("A matrix polynomial needs at least one coefficient")
        first = coeffs[0]
        for c in coeffs:
            if c.shape != first.shape:
                raise ShapeMismatch(f"Coefficient shapes {c.shape} and {first.shape} differ")
            if c.backend is not first.backend:
                raise ShapeMismatch("Coefficients use different scalar backends")
        coeffs = list(coeffs)
        degree = max((j for j, c in enumerate(coeffs) if not c.is_zero()), default=-1)
        if grade is None:
            grade = len(coeffs) - 1
        if grade < degree:
            raise GradeTooSmall(f"Grade {grade} is below the degree {degree}")
        if grade < 0:
            raise GradeTooSmall("Grade must be non-negative")
        zero = Matrix.zeros(first.rows, first.cols, first.backend)
        coeffs = (coeffs + [zero] * (grade + 1 - len(coeffs)))[:grade + 1]
        return cls(first.rows, first.cols, grade, tuple(coeffs), first.backend)

    @classmethod
    def zero(cls, rows: int, cols: int, grade: int, backend: Backend = Backend.GAUSSIAN) -> "MatrixPolynomial":
        zero = Matrix.zeros(rows, cols, backend)
        return cls(rows, cols, grade, (zero,) * (grade + 1), Backend(backend))

    @classmethod
    def constant(cls, matrix: Matrix, grade: int = 0) -> "MatrixPolynomial":
        return cls.from_coeffs([matrix], grade)

    @classmethod
    def identity(cls, n: int, grade: int = 0, backend: Backend = Backend.GAUSSIAN) -> "MatrixPolynomial":
        return cls.from_coeffs([Matrix.identity(n, backend)], grade)

    @classmethod
    def from_entries(cls, entries: Sequence[Sequence[ScalarPolynomial]], grade: int,
                     backend: Backend, cols: Optional[int] = None) -> "MatrixPolynomial":
        """Build from a grid of entry polynomials."""
        rows = len(entries)
        width = cols if cols is not None else (len(entries[0]) if rows else 0)
        coeffs = []
        for j in range(grade + 1):
            coeffs.append(Matrix(rows, width, tuple(
                tuple(entries[r][c].coefficient(j) for c in range(width)) for r in range(rows)
            ), Backend(backend)))
        degree = max((e.degree for row in entries for e in row), default=-1)
        if degree > grade:
            raise GradeTooSmall(f"Grade {grade} is below the degree {degree}")
        return cls(rows, width, grade, tuple(coeffs), Backend(backend))

    @classmethod
    def from_rows(cls, coeff_rows: Sequence[Sequence[Sequence]], backend: Backend = Backend.GAUSSIAN,
                  grade: Optional[int] = None) -> "MatrixPolynomial":
        """Build from nested lists: one list of rows per coefficient."""
        return cls.from_coeffs([Matrix.from_rows(rows, backend) for rows in coeff_rows], grade)

    # ------------------------------------------------------------------
    # Basic properties
    # ------------------------------------------------------------------

    @property
    def shape(self) -> Tuple[int, int]:
        return self.rows, self.cols

    @property
    def degree(self) -> int:
        """Index of the last nonzero coefficient, -1 for the zero polynomial."""
        return max((j for j, c in enumerate(self.coeffs) if not c.is_zero()), default=-1)

    def coefficient(self, j: int) -> Matrix:
        if 0 <= j <= self.grade:
            return self.coeffs[j]
        return Matrix.zeros(self.rows, self.cols, self.backend)

    def is_zero(self) -> bool:
        return all(c.is_zero() for c in self.coeffs)

    def entry(self, i: int, j: int) -> ScalarPolynomial:
        return ScalarPolynomial.from_coeffs([c[i, j] for c in self.coeffs], self.backend)

    def entries(self) -> List[List[ScalarPolynomial]]:
        return [[self.entry(i, j) for j in range(self.cols)] for i in range(self.rows)]

    def to_domain_matrix(self) -> DomainMatrix:
        """
        This polynomial as a matrix over polynomial_domain(backend).

        Raises:
            FloatBackendUnsupported: On the float backend.
        """
        if not self.backend.exact:
            raise FloatBackendUnsupported("Matrices over F[λ] need an exact backend")
        return DomainMatrix([[e.to_ring() for e in row] for row in self.entries()],
                            self.shape, polynomial_domain(self.backend))

    def with_grade(self, grade: int) -> "MatrixPolynomial":
        """
        Same polynomial with another grade.

        Raises:
            GradeTooSmall: If grade is below the degree.
        """
        if grade == self.grade:
            return self
        if grade < self.degree or grade < 0:
            raise GradeTooSmall(f"Grade {grade} is below the degree {self.degree}")
        return MatrixPolynomial.from_coeffs(list(self.coeffs[:grade + 1]), grade)

    def same_values(self, other: "MatrixPolynomial") -> bool:
        """Equality as polynomials, ignoring the declared grade."""
        if self.shape != other.shape:
            return False
        top = max(self.grade, other.grade)
        return all(self.coefficient(j) == other.coefficient(j) for j in range(top + 1))

    # ------------------------------------------------------------------
    # Algebra
    # ------------------------------------------------------------------

    def __add__(self, other: "MatrixPolynomial") -> "MatrixPolynomial":
        if self.shape != other.shape:
            raise DimensionMismatch(f"Cannot add {self.shape} and {other.shape}")
        grade = max(self.grade, other.grade)
        return MatrixPolynomial(self.rows, self.cols, grade, tuple(
            self.coefficient(j) + other.coefficient(j) for j in range(grade + 1)
        ), self.backend)

    def __neg__(self) -> "MatrixPolynomial":
        return MatrixPolynomial(self.rows, self.cols, self.grade, tuple(-c for c in self.coeffs), self.backend)

    def __sub__(self, other: "MatrixPolynomial") -> "MatrixPolynomial":
        return self + (-other)

    def scale(self, alpha) -> "MatrixPolynomial":
        return MatrixPolynomial(self.rows, self.cols, self.grade,
                                tuple(c * alpha for c in self.coeffs), self.backend)

    def transpose(self) -> "MatrixPolynomial":
        return MatrixPolynomial(self.cols, self.rows, self.grade,
                                tuple(c.transpose() for c in self.coeffs), self.backend)

    def conj(self) -> "MatrixPolynomial":
        return MatrixPolynomial(self.rows, self.cols, self.grade,
                                tuple(c.conj() for c in self.coeffs), self.backend)

    def star(self, flavor: StarFlavor) -> "MatrixPolynomial":
        """Coefficient-wise ⋆; conjugation acts on coefficients, never on λ."""
        return MatrixPolynomial(self.cols, self.rows, self.grade,
                                tuple(c.star(flavor) for c in self.coeffs), self.backend)

    def rev(self, grade: Optional[int] = None) -> "MatrixPolynomial":
        """
        rev_g P(λ) = λ^g P(1/λ).

        Raises:
            GradeTooSmall: If g is below the degree.
        """
        g = self.grade if grade is None else grade
        if g < self.degree:
            raise GradeTooSmall(f"Cannot reverse with grade {g} below the degree {self.degree}")
        return MatrixPolynomial(self.rows, self.cols, g,
                                tuple(self.coefficient(g - j) for j in range(g + 1)), self.backend)

    def matmul(self, other: "MatrixPolynomial", grade: Optional[int] = None) -> "MatrixPolynomial":
        """
        Product with result grade defaulting to the sum of the grades.

        Raises:
            DimensionMismatch: On incompatible sizes.
            GradeTooSmall: If the requested grade is below the product's degree.
        """
        if self.cols != other.rows:
            raise DimensionMismatch(f"Cannot multiply {self.shape} by {other.shape}")
        total = self.grade + other.grade
        zero = Matrix.zeros(self.rows, other.cols, self.backend)
        out = [zero] * (total + 1)
        for i, a in enumerate(self.coeffs):
            if a.is_zero():
                continue
            for j, b in enumerate(other.coeffs):
                if b.is_zero():
                    continue
                out[i + j] = out[i + j] + a @ b
        product = MatrixPolynomial(self.rows, other.cols, total, tuple(out), self.backend)
        if grade is None:
            return product
        if grade < product.degree:
            raise GradeTooSmall(f"Product degree {product.degree} exceeds requested grade {grade}")
        return MatrixPolynomial.from_coeffs(list(out[:grade + 1]), grade)

    def __matmul__(self, other: "MatrixPolynomial") -> "MatrixPolynomial":
        return self.matmul(other)

    def kron(self, other: "MatrixPolynomial") -> "MatrixPolynomial":
        total = self.grade + other.grade
        out = [Matrix.zeros(self.rows * other.rows, self.cols * other.cols, self.backend)] * (total + 1)
        for i, a in enumerate(self.coeffs):
            for j, b in enumerate(other.coeffs):
                out[i + j] = out[i + j] + a.kron(b)
        return MatrixPolynomial(self.rows * other.rows, self.cols * other.cols, total, tuple(out), self.backend)

    def kron_identity(self, n: int) -> "MatrixPolynomial":
        """P ⊗ I_n, same grade."""
        return MatrixPolynomial(self.rows * n, self.cols * n, self.grade,
                                tuple(c.kron_identity(n) for c in self.coeffs), self.backend)

    def substitute_power(self, ell: int) -> "MatrixPolynomial":
        """P(λ^ℓ) with grade ℓ·k."""
        if ell < 1:
            raise ValueError("ℓ must be a positive integer")
        zero = Matrix.zeros(self.rows, self.cols, self.backend)
        out = [zero] * (self.grade * ell + 1)
        for j, c in enumerate(self.coeffs):
            out[j * ell] = c
        return MatrixPolynomial(self.rows, self.cols, self.grade * ell, tuple(out), self.backend)

    def __call__(self, x) -> Matrix:
        """Evaluate at a scalar by Horner's rule."""
        x = Scalar.of(x, self.backend)
        result = Matrix.zeros(self.rows, self.cols, self.backend)
        for c in reversed(self.coeffs):
            result = result * x + c
        return result

    # ------------------------------------------------------------------
    # Blocks
    # ------------------------------------------------------------------

    def block(self, s: int, t: int, height: int, width: Optional[int] = None) -> "MatrixPolynomial":
        """The (s,t) block, 1-based, of a partition into height×width blocks."""
        width = height if width is None else width
        r0, c0 = (s - 1) * height, (t - 1) * width
        return MatrixPolynomial(height, width, self.grade,
                                tuple(c.submatrix(r0, c0, height, width) for c in self.coeffs),
                                self.backend)

    def with_block(self, s: int, t: int, block: "MatrixPolynomial") -> "MatrixPolynomial":
        if block.grade > self.grade and block.degree > self.grade:
            raise GradeTooSmall("Block degree exceeds the polynomial grade")
        r0, c0 = (s - 1) * block.rows, (t - 1) * block.cols
        return MatrixPolynomial(self.rows, self.cols, self.grade, tuple(
            c.with_block(r0, c0, block.coefficient(j)) for j, c in enumerate(self.coeffs)
        ), self.backend)

    @classmethod
    def from_blocks(cls, blocks: Sequence[Sequence["MatrixPolynomial"]], grade: Optional[int] = None) -> "MatrixPolynomial":
        g = grade if grade is not None else max(b.grade for row in blocks for b in row)
        coeffs = []
        for j in range(g + 1):
            coeffs.append(Matrix.block([[b.coefficient(j) for b in row] for row in blocks]))
        return cls.from_coeffs(coeffs, g)

    # ------------------------------------------------------------------
    # Export
    # ------------------------------------------------------------------

    def to_numpy(self) -> np.ndarray:
        """Coefficients as a (k+1, m, n) complex array."""
        return np.stack([c.to_numpy() for c in self.coeffs]) if self.coeffs else np.zeros((0, self.rows, self.cols))

    def __str__(self) -> str:
        return "\n".join(" ".join(str(e) for e in row) for row in self.entries())


# ----------------------------------------------------------------------
# Functional interface
# ----------------------------------------------------------------------

def evaluate(P: MatrixPolynomial, x) -> Matrix:
    return P(x)


def rev(P: MatrixPolynomial, grade: Optional[int] = None) -> MatrixPolynomial:
    return P.rev(grade)


def star(P: MatrixPolynomial, flavor: StarFlavor) -> MatrixPolynomial:
    return P.star(flavor)


def matpoly_mul(P: MatrixPolynomial, Q: MatrixPolynomial, grade: Optional[int] = None) -> MatrixPolynomial:
    return P.matmul(Q, grade)


def kron(P: MatrixPolynomial, n: int) -> MatrixPolynomial:
    return P.kron_identity(n)


def substitute_power(P: MatrixPolynomial, ell: int) -> MatrixPolynomial:
    return P.substitute_power(ell)


def det_poly(P: MatrixPolynomial) -> ScalarPolynomial:
    """
    Determinant of a square matrix polynomial.

    Computed by sympy over F[λ].

    Raises:
        ShapeMismatch: If P is not square.
        FloatBackendUnsupported: On the float backend.
    """
    if P.rows != P.cols:
        raise ShapeMismatch(f"Determinant needs a square polynomial, got {P.shape}")
    if not P.backend.exact:
        raise FloatBackendUnsupported("det_poly is only available on exact backends")
    if P.rows == 0:
        return ScalarPolynomial.constant(1, P.backend)
    return ScalarPolynomial.from_ring(P.to_domain_matrix().det(), P.backend)


def random_matrix_polynomial(rng: np.random.Generator, rows: int, cols: int, grade: int,
                             backend: Backend = Backend.GAUSSIAN, bound: int = 5) -> MatrixPolynomial:
    """Integer (Gaussian integer) coefficients drawn uniformly from [-bound, bound]."""
    backend = Backend(backend)
    coeffs: List[Matrix] = []
    for _ in range(grade + 1):
        re_part = rng.integers(-bound, bound + 1, size=(rows, cols))
        if backend is Backend.GAUSSIAN:
            im_part = rng.integers(-bound, bound + 1, size=(rows, cols))
        else:
            im_part = np.zeros((rows, cols), dtype=int)
        entries = tuple(
            tuple(Scalar.of(int(re_part[i, j]), backend) + (Scalar.gaussian(0, int(im_part[i, j]))
                                                            if backend is Backend.GAUSSIAN else 0)
                  for j in range(cols))
            for i in range(rows)
        )
        coeffs.append(Matrix(rows, cols, entries, backend))
    return MatrixPolynomial(rows, cols, grade, tuple(coeffs), backend)
