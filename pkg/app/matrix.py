########################
# Exact Matrices       #
########################

"""
Constant matrices over a scalar backend.

Exact backends hand products, rank, determinant, inverse and null space to a
sympy DomainMatrix over QQ or QQ_I; the float backend defers to numpy.
"""

from dataclasses import dataclass
from enum import Enum
from typing import Iterable, List, Optional, Sequence, Tuple

import numpy as np

from sympy.polys.matrices import DomainMatrix
from sympy.polys.matrices.exceptions import DMNonInvertibleMatrixError

from app.exceptions import DivisionByZero, FloatBackendUnsupported, ShapeMismatch
from app.scalar import Backend, Scalar


class StarFlavor(str, Enum):
    """Which involution ⋆ means: transpose or conjugate transpose."""
    TRANSPOSE = "T"
    CONJUGATE_TRANSPOSE = "H"

    @classmethod
    def parse(cls, text) -> "StarFlavor":
        if isinstance(text, StarFlavor):
            return text
        key = str(text).strip().upper()
        if key in ("T", "TRANSPOSE"):
            return cls.TRANSPOSE
        if key in ("H", "*", "CONJUGATE_TRANSPOSE", "CONJUGATE-TRANSPOSE"):
            return cls.CONJUGATE_TRANSPOSE
        raise ValueError(f"Unknown star flavor: {text!r}")


@dataclass(frozen=True)
class Matrix:
    """An m×n constant matrix; empty shapes keep their dimensions."""
    rows: int
    cols: int
    entries: Tuple[Tuple[Scalar, ...], ...]
    backend: Backend

    # ------------------------------------------------------------------
    # Construction
    # ------------------------------------------------------------------

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence], backend: Backend = Backend.GAUSSIAN,
                  cols: Optional[int] = None) -> "Matrix":
        backend = Backend(backend)
        entries = tuple(tuple(Scalar.of(x, backend) for x in row) for row in rows)
        width = cols if cols is not None else (len(entries[0]) if entries else 0)
        if any(len(row) != width for row in entries):
            raise ShapeMismatch("Matrix rows have different lengths")
        return cls(len(entries), width, entries, backend)

    @classmethod
    def zeros(cls, rows: int, cols: int, backend: Backend = Backend.GAUSSIAN) -> "Matrix":
        zero = Scalar.zero(backend)
        return cls(rows, cols, tuple((zero,) * cols for _ in range(rows)), Backend(backend))

    @classmethod
    def identity(cls, n: int, backend: Backend = Backend.GAUSSIAN, alpha=1) -> "Matrix":
        zero = Scalar.zero(backend)
        a = Scalar.of(alpha, backend)
        return cls(n, n, tuple(tuple(a if i == j else zero for j in range(n)) for i in range(n)),
                   Backend(backend))

    @classmethod
    def block(cls, blocks: Sequence[Sequence["Matrix"]]) -> "Matrix":
        """Assemble a matrix from a grid of blocks with consistent shapes."""
        if not blocks or not blocks[0]:
            raise ShapeMismatch("Empty block grid")
        backend = blocks[0][0].backend
        col_widths = [b.cols for b in blocks[0]]
        rows: List[Tuple[Scalar, ...]] = []
        for block_row in blocks:
            if [b.cols for b in block_row] != col_widths:
                raise ShapeMismatch("Block columns have inconsistent widths")
            height = block_row[0].rows
            if any(b.rows != height for b in block_row):
                raise ShapeMismatch("Block row has inconsistent heights")
            for i in range(height):
                rows.append(tuple(x for b in block_row for x in b.entries[i]))
        return cls(len(rows), sum(col_widths), tuple(rows), backend)

    # ------------------------------------------------------------------
    # Access
    # ------------------------------------------------------------------

    def __getitem__(self, index: Tuple[int, int]) -> Scalar:
        i, j = index
        return self.entries[i][j]

    @property
    def shape(self) -> Tuple[int, int]:
        return self.rows, self.cols

    def submatrix(self, r0: int, c0: int, height: int, width: int) -> "Matrix":
        return Matrix(height, width,
                      tuple(self.entries[i][c0:c0 + width] for i in range(r0, r0 + height)),
                      self.backend)

    def select(self, row_idx: Sequence[int], col_idx: Sequence[int]) -> "Matrix":
        return Matrix(len(row_idx), len(col_idx),
                      tuple(tuple(self.entries[i][j] for j in col_idx) for i in row_idx),
                      self.backend)

    def with_block(self, r0: int, c0: int, block: "Matrix") -> "Matrix":
        rows = [list(row) for row in self.entries]
        for i in range(block.rows):
            for j in range(block.cols):
                rows[r0 + i][c0 + j] = block.entries[i][j]
        return Matrix(self.rows, self.cols, tuple(tuple(r) for r in rows), self.backend)

    def is_zero(self) -> bool:
        return all(x.is_zero() for row in self.entries for x in row)

    # ------------------------------------------------------------------
    # Arithmetic
    # ------------------------------------------------------------------

    def _check_same_shape(self, other: "Matrix") -> None:
        if self.shape != other.shape:
            raise ShapeMismatch(f"Shapes {self.shape} and {other.shape} differ")

    def __add__(self, other: "Matrix") -> "Matrix":
        if not isinstance(other, Matrix):
            return NotImplemented
        self._check_same_shape(other)
        return Matrix(self.rows, self.cols, tuple(
            tuple(a + b for a, b in zip(r1, r2)) for r1, r2 in zip(self.entries, other.entries)
        ), self.backend)

    def __neg__(self) -> "Matrix":
        return Matrix(self.rows, self.cols, tuple(tuple(-x for x in row) for row in self.entries),
                      self.backend)

    def __sub__(self, other: "Matrix") -> "Matrix":
        return self + (-other)

    def __mul__(self, alpha) -> "Matrix":
        if isinstance(alpha, Matrix):
            return NotImplemented
        return Matrix(self.rows, self.cols, tuple(tuple(x * alpha for x in row) for row in self.entries),
                      self.backend)

    __rmul__ = __mul__

    def __matmul__(self, other: "Matrix") -> "Matrix":
        if self.cols != other.rows:
            raise ShapeMismatch(f"Cannot multiply {self.shape} by {other.shape}")
        if self.backend.exact and other.backend is self.backend and 0 not in (self.rows, self.cols, other.cols):
            product = self.to_domain_matrix().matmul(other.to_domain_matrix())
            return Matrix.from_domain_matrix(product, self.backend)
        zero = Scalar.zero(self.backend)
        out = []
        columns = list(zip(*other.entries)) if other.rows else [()] * other.cols
        for row in self.entries:
            out_row = []
            for col in columns:
                acc = zero
                for a, b in zip(row, col):
                    if not a.is_zero() and not b.is_zero():
                        acc = acc + a * b
                out_row.append(acc)
            out.append(tuple(out_row))
        return Matrix(self.rows, other.cols, tuple(out), self.backend)

    def transpose(self) -> "Matrix":
        return Matrix(self.cols, self.rows, tuple(
            tuple(self.entries[i][j] for i in range(self.rows)) for j in range(self.cols)
        ), self.backend)

    @property
    def T(self) -> "Matrix":
        return self.transpose()

    def conj(self) -> "Matrix":
        return Matrix(self.rows, self.cols, tuple(tuple(x.conj() for x in row) for row in self.entries),
                      self.backend)

    def star(self, flavor: StarFlavor) -> "Matrix":
        flavor = StarFlavor.parse(flavor)
        result = self.transpose()
        return result.conj() if flavor is StarFlavor.CONJUGATE_TRANSPOSE else result

    def kron(self, other: "Matrix") -> "Matrix":
        rows = []
        for i in range(self.rows):
            for p in range(other.rows):
                rows.append(tuple(
                    self.entries[i][j] * other.entries[p][q]
                    for j in range(self.cols) for q in range(other.cols)
                ))
        return Matrix(self.rows * other.rows, self.cols * other.cols, tuple(rows), self.backend)

    def kron_identity(self, n: int) -> "Matrix":
        """self ⊗ I_n."""
        return self.kron(Matrix.identity(n, self.backend))

    # ------------------------------------------------------------------
    # Elimination
    # ------------------------------------------------------------------

    def to_domain_matrix(self) -> DomainMatrix:
        """This matrix over backend.domain, for exact elimination."""
        return DomainMatrix([[x.to_domain() for x in row] for row in self.entries],
                            self.shape, self.backend.domain)

    @classmethod
    def from_domain_matrix(cls, M: DomainMatrix, backend: Backend) -> "Matrix":
        rows, cols = M.shape
        entries = tuple(tuple(Scalar.from_domain(x, backend) for x in row) for row in M.to_list())
        return cls(rows, cols, entries if rows else (), Backend(backend))

    def rank(self) -> int:
        if self.rows == 0 or self.cols == 0:
            return 0
        if not self.backend.exact:
            return int(np.linalg.matrix_rank(self.to_numpy()))
        return self.to_domain_matrix().rank()

    def det(self) -> Scalar:
        if self.rows != self.cols:
            raise ShapeMismatch("Determinant needs a square matrix")
        if self.rows == 0:
            return Scalar.one(self.backend)
        if not self.backend.exact:
            return Scalar.of(complex(np.linalg.det(self.to_numpy())), self.backend)
        return Scalar.from_domain(self.to_domain_matrix().det(), self.backend)

    def inverse(self) -> "Matrix":
        """
        Raises:
            DivisionByZero: If the matrix is singular.
        """
        if self.rows != self.cols:
            raise ShapeMismatch("Inverse needs a square matrix")
        if self.rows == 0:
            return self
        if not self.backend.exact:
            try:
                inverse = np.linalg.inv(self.to_numpy())
            except np.linalg.LinAlgError as e:
                raise DivisionByZero("Matrix is singular") from e
            return Matrix.from_rows([[complex(x) for x in row] for row in inverse], self.backend)
        try:
            return Matrix.from_domain_matrix(self.to_domain_matrix().inv(), self.backend)
        except DMNonInvertibleMatrixError as e:
            raise DivisionByZero("Matrix is singular") from e

    def nullspace(self) -> List["Matrix"]:
        """
        Basis of the right null space as column vectors.

        Raises:
            FloatBackendUnsupported: On the float backend.
        """
        if not self.backend.exact:
            raise FloatBackendUnsupported("Null spaces need an exact backend")
        if self.cols == 0:
            return []
        if self.rows == 0:
            identity = Matrix.identity(self.cols, self.backend)
            return [identity.submatrix(0, j, self.cols, 1) for j in range(self.cols)]
        basis = Matrix.from_domain_matrix(self.to_domain_matrix().nullspace(), self.backend)
        return [basis.submatrix(r, 0, 1, self.cols).transpose() for r in range(basis.rows)]

    def to_numpy(self) -> np.ndarray:
        return np.array([[x.to_complex() for x in row] for row in self.entries],
                        dtype=complex).reshape(self.rows, self.cols)

    def __str__(self) -> str:
        return "[" + "; ".join(" ".join(str(x) for x in row) for row in self.entries) + "]"


def block_diag(blocks: Iterable[Matrix]) -> Matrix:
    blocks = list(blocks)
    backend = blocks[0].backend
    rows = sum(b.rows for b in blocks)
    cols = sum(b.cols for b in blocks)
    result = Matrix.zeros(rows, cols, backend)
    r = c = 0
    for b in blocks:
        result = result.with_block(r, c, b)
        r += b.rows
        c += b.cols
    return result
