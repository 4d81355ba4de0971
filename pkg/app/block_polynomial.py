########################
# Block Polynomials    #
########################

"""
This module implements block-partitioned matrix polynomials that remember,
block by block and power by power, which coefficients of the source
polynomial each block coefficient was built from.

Key Features:
1. Storage:
   - A concrete MatrixPolynomial (the numeric truth)
   - An optional provenance grid: one CoefficientExpr per block and power
   - The source polynomial the expressions refer to

2. Provenance Operations:
   - Möbius transform, ⋆ and scaling act on numbers and expressions together
   - rescan() re-evaluates every expression and compares with the numbers
   - structure substitution and re-basing onto another coefficient family

3. Inspection:
   - block labels (Zero, Identity(α), Coefficient(α, j), Expression)
   - census of nonzero blocks
   - text rendering in the "P_6+λP_7+λ²P_8" style
"""

from dataclasses import dataclass, replace
from typing import Callable, Dict, List, Optional, Sequence, Tuple

from app.coefficient_expr import CoefficientExpr, LabelKind, ProvenanceLabel
from app.exceptions import MissingProvenance, ShapeMismatch
from app.matpoly import MatrixPolynomial
from app.matrix import Matrix, StarFlavor
from app.mobius import MobiusMatrix, mobius as mobius_numeric, mobius_sequence
from app.polynomial import SUPERSCRIPTS
from app.scalar import Backend

ExprGrid = Tuple[Tuple[Tuple[CoefficientExpr, ...], ...], ...]


def _power_text(i: int) -> str:
    if i == 0:
        return ""
    if i == 1:
        return "λ"
    return "λ" + str(i).translate(SUPERSCRIPTS)


def render_entry(exprs: Sequence[CoefficientExpr]) -> str:
    """Render Σ_i λ^i expr_i, e.g. 'P_6+λP_7+λ²P_8' or '-I+λ(P_0+P_1)'."""
    parts = []
    for i, e in enumerate(exprs):
        if e.is_zero():
            continue
        text = e.render()
        power = _power_text(i)
        if power:
            single = len(e.terms) == 1
            if single and text.startswith("-"):
                text = f"-{power}{text[1:]}"
            elif single:
                text = f"{power}{text}"
            else:
                text = f"{power}({text})"
        parts.append(text)
    if not parts:
        return "0"
    out = parts[0]
    for part in parts[1:]:
        out += part if part.startswith("-") else f"+{part}"
    return out


@dataclass(frozen=True)
class BlockPolynomial:
    """
    A matrix polynomial partitioned into n×n blocks, with optional provenance.

    Attributes:
        base: The concrete polynomial.
        n: Block size.
        provenance: exprs[s][t][i] for 0-based block (s, t) and power i, or None.
        source_coeffs: Coefficients the expressions refer to.
        flavor: ⋆ used when evaluating starred symbols.
        symbol: Name of the coefficient family (P, Q, ...).
    """
    base: MatrixPolynomial
    n: int
    provenance: Optional[ExprGrid] = None
    source_coeffs: Optional[Tuple[Matrix, ...]] = None
    flavor: StarFlavor = StarFlavor.TRANSPOSE
    symbol: str = "P"

    # ------------------------------------------------------------------
    # Construction
    # ------------------------------------------------------------------

    @classmethod
    def from_provenance(cls, grid: Sequence[Sequence[Sequence[CoefficientExpr]]],
                        source_coeffs: Sequence[Matrix], n: int, grade: int,
                        flavor: StarFlavor = StarFlavor.TRANSPOSE, symbol: str = "P",
                        backend: Optional[Backend] = None) -> "BlockPolynomial":
        """
        Build numbers from expressions: block (s,t) power i is exprs[s][t][i]
        evaluated on source_coeffs.
        """
        backend = backend or (source_coeffs[0].backend if source_coeffs else Backend.GAUSSIAN)
        block_rows = len(grid)
        block_cols = len(grid[0]) if block_rows else 0
        padded = tuple(tuple(_pad(grid[s][t], grade, backend, symbol) for t in range(block_cols))
                       for s in range(block_rows))
        coeffs = []
        for i in range(grade + 1):
            coeffs.append(Matrix.block([[padded[s][t][i].evaluate(source_coeffs, n, flavor)
                                         for t in range(block_cols)] for s in range(block_rows)]))
        base = MatrixPolynomial(block_rows * n, block_cols * n, grade, tuple(coeffs), backend)
        return cls(base, n, padded, tuple(source_coeffs), StarFlavor.parse(flavor), symbol)

    @classmethod
    def plain(cls, base: MatrixPolynomial, n: int) -> "BlockPolynomial":
        if n <= 0 or base.rows % n or base.cols % n:
            raise ShapeMismatch(f"A {base.shape} polynomial cannot be split into {n}x{n} blocks")
        return cls(base, n)

    # ------------------------------------------------------------------
    # Shape
    # ------------------------------------------------------------------

    @property
    def block_rows(self) -> int:
        return self.base.rows // self.n

    @property
    def block_cols(self) -> int:
        return self.base.cols // self.n

    @property
    def grade(self) -> int:
        return self.base.grade

    @property
    def backend(self) -> Backend:
        return self.base.backend

    def has_provenance(self) -> bool:
        return self.provenance is not None

    def _require_provenance(self) -> ExprGrid:
        if self.provenance is None:
            raise MissingProvenance("This block polynomial carries no provenance")
        return self.provenance

    # ------------------------------------------------------------------
    # Blocks and labels
    # ------------------------------------------------------------------

    def block(self, s: int, t: int) -> MatrixPolynomial:
        """Block (s, t), 1-based."""
        return self.base.block(s, t, self.n)

    def expressions(self, s: int, t: int) -> Tuple[CoefficientExpr, ...]:
        """Provenance of block (s, t), 1-based, one expression per power."""
        return self._require_provenance()[s - 1][t - 1]

    def label(self, s: int, t: int) -> ProvenanceLabel:
        """
        Block-level label: Zero, Identity(α) (constant αI), Coefficient(α, j)
        (a single power carrying αP_j) or Expression.
        """
        exprs = self.expressions(s, t)
        nonzero = [(i, e) for i, e in enumerate(exprs) if not e.is_zero()]
        if not nonzero:
            return ProvenanceLabel(LabelKind.ZERO)
        if len(nonzero) == 1:
            i, e = nonzero[0]
            lab = e.label()
            if lab.kind is LabelKind.IDENTITY and i == 0:
                return lab
            if lab.kind is LabelKind.COEFFICIENT:
                return replace(lab, power=i)
        return ProvenanceLabel(LabelKind.EXPRESSION)

    def coefficient_labels(self) -> Dict[Tuple[int, int, int], ProvenanceLabel]:
        """Label of every (s, t, power) block coefficient, 1-based blocks."""
        grid = self._require_provenance()
        return {(s + 1, t + 1, i): e.label()
                for s, row in enumerate(grid) for t, exprs in enumerate(row) for i, e in enumerate(exprs)}

    def nonzero_blocks(self) -> List[Tuple[int, int]]:
        return [(s, t) for s in range(1, self.block_rows + 1) for t in range(1, self.block_cols + 1)
                if not self.block(s, t).is_zero()]

    def census(self) -> int:
        """Number of blocks that are not identically zero."""
        return len(self.nonzero_blocks())

    # ------------------------------------------------------------------
    # Consistency
    # ------------------------------------------------------------------

    def rescan(self) -> bool:
        """True when every expression evaluates to the stored numbers."""
        grid = self._require_provenance()
        for s, row in enumerate(grid):
            for t, exprs in enumerate(row):
                block = self.base.block(s + 1, t + 1, self.n)
                for i, e in enumerate(exprs):
                    if e.evaluate(self.source_coeffs, self.n, self.flavor) != block.coefficient(i):
                        return False
        return True

    # ------------------------------------------------------------------
    # Transformations (numbers and provenance together)
    # ------------------------------------------------------------------

    def _map_grid(self, fn: Callable[[Tuple[CoefficientExpr, ...]], Tuple[CoefficientExpr, ...]],
                  transpose: bool = False) -> Optional[ExprGrid]:
        if self.provenance is None:
            return None
        grid = self.provenance
        if transpose:
            return tuple(tuple(fn(grid[s][t]) for s in range(len(grid))) for t in range(len(grid[0])))
        return tuple(tuple(fn(exprs) for exprs in row) for row in grid)

    def with_base(self, base: MatrixPolynomial, provenance: Optional[ExprGrid]) -> "BlockPolynomial":
        return replace(self, base=base, provenance=provenance)

    def star(self) -> "BlockPolynomial":
        """Blockwise ⋆: block (s,t) of the result is (block (t,s))^⋆."""
        flavor = self.flavor
        grid = self._map_grid(lambda exprs: tuple(e.star(flavor) for e in exprs), transpose=True)
        return self.with_base(self.base.star(flavor), grid)

    def scale(self, alpha) -> "BlockPolynomial":
        grid = self._map_grid(lambda exprs: tuple(e * alpha for e in exprs))
        return self.with_base(self.base.scale(alpha), grid)

    def __add__(self, other: "BlockPolynomial") -> "BlockPolynomial":
        grid = None
        if self.provenance is not None and other.provenance is not None:
            grid = tuple(tuple(tuple(a + b for a, b in zip(e1, e2)) for e1, e2 in zip(r1, r2))
                         for r1, r2 in zip(self.provenance, other.provenance))
        return self.with_base(self.base + other.base, grid)

    def mobius(self, A: MobiusMatrix, sign: int = 1) -> "BlockPolynomial":
        """M_A[±self] applied to numbers and to every block's expressions."""
        A = A.to(self.backend)
        zero = CoefficientExpr.zero(self.backend, self.symbol)
        grid = self._map_grid(lambda exprs: tuple(mobius_sequence(list(exprs), A, zero, sign)))
        return self.with_base(mobius_numeric(A, self.base, sign), grid)

    def substitute(self, relation: Callable[[int], Tuple[int, int]]) -> "BlockPolynomial":
        """Rewrite P_j^⋆ as sign·P_j' everywhere; numbers are unchanged."""
        grid = self._map_grid(lambda exprs: tuple(e.substitute(relation) for e in exprs))
        return self.with_base(self.base, grid)

    def rebase(self, transform: Matrix, new_coeffs: Sequence[Matrix], symbol: str = "Q") -> "BlockPolynomial":
        """Express provenance in another coefficient family; numbers are unchanged."""
        self._require_provenance()
        grid = self._map_grid(lambda exprs: tuple(e.rebase(transform, symbol) for e in exprs))
        return replace(self, provenance=grid, source_coeffs=tuple(new_coeffs), symbol=symbol)

    def zero_block(self, s: int, t: int) -> "BlockPolynomial":
        zero = MatrixPolynomial.zero(self.n, self.n, self.grade, self.backend)
        grid = None
        if self.provenance is not None:
            rows = [list(row) for row in self.provenance]
            rows[s - 1][t - 1] = tuple(CoefficientExpr.zero(self.backend, self.symbol)
                                       for _ in range(self.grade + 1))
            grid = tuple(tuple(r) for r in rows)
        return self.with_base(self.base.with_block(s, t, zero), grid)

    # ------------------------------------------------------------------
    # Rendering
    # ------------------------------------------------------------------

    def render_rows(self) -> List[List[str]]:
        grid = self._require_provenance()
        return [[render_entry(exprs) for exprs in row] for row in grid]

    def render(self) -> str:
        """Aligned text grid of block entries."""
        if self.provenance is None:
            return str(self.base)
        rows = self.render_rows()
        widths = [max(len(rows[s][t]) for s in range(len(rows))) for t in range(len(rows[0]))]
        lines = ["[ " + "  ".join(cell.ljust(w) for cell, w in zip(row, widths)) + " ]" for row in rows]
        return "\n".join(lines)

    def __str__(self) -> str:
        return self.render()


def _pad(exprs: Sequence[CoefficientExpr], grade: int, backend: Backend, symbol: str) -> Tuple[CoefficientExpr, ...]:
    exprs = list(exprs)
    if len(exprs) > grade + 1 and any(not e.is_zero() for e in exprs[grade + 1:]):
        raise ShapeMismatch(f"Block expression exceeds grade {grade}")
    zero = CoefficientExpr.zero(backend, symbol)
    return tuple((exprs + [zero] * (grade + 1 - len(exprs)))[:grade + 1])


def constant_blocks(block_rows: int, block_cols: int, grade: int, backend: Backend,
                    symbol: str = "P") -> List[List[List[CoefficientExpr]]]:
    """A mutable all-zero provenance grid."""
    zero = CoefficientExpr.zero(backend, symbol)
    return [[[zero] * (grade + 1) for _ in range(block_cols)] for _ in range(block_rows)]
