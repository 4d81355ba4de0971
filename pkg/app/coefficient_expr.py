########################
# Coefficient Provenance #
########################

"""
This module tracks, symbolically, how each block coefficient of a
lification is built from the coefficients of the polynomial it came from.

Key Features:
1. Expression Register:
   - A CoefficientExpr is a linear combination of words in the symbols
     I, P_j and P_j^⋆, so sums, scalings and products such as P_0P_4 are
     tracked exactly
   - Scalars come from the same backend as the source polynomial

2. Involutions:
   - star() reverses every word, toggles ⋆ on each symbol and conjugates the
     scalars for conjugate transposition
   - substitute() rewrites P_j^⋆ as ±P_j' using a structure relation

3. Re-basing:
   - rebase() rewrites P_i as Σ_j T_ij Q_j so that the blocks of a Möbius
     image can be read in the coefficients of the transformed polynomial

4. Labels:
   - Zero, Identity(α), Coefficient(α, j) or Expression, the vocabulary used
     by the companion predicate and the pretty renderer
"""

from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import Callable, Dict, Iterable, Optional, Sequence, Tuple

from app.exceptions import MissingProvenance, ShapeMismatch
from app.matrix import Matrix, StarFlavor
from app.scalar import Backend, Scalar

Atom = Tuple[int, bool]
Word = Tuple[Atom, ...]


class LabelKind(str, Enum):
    ZERO = "Zero"
    IDENTITY = "Identity"
    COEFFICIENT = "Coefficient"
    EXPRESSION = "Expression"


@dataclass(frozen=True)
class ProvenanceLabel:
    """Classification of a block coefficient (or of a whole block)."""
    kind: LabelKind
    alpha: Optional[Scalar] = None
    index: Optional[int] = None
    power: Optional[int] = None

    def __str__(self) -> str:
        if self.kind is LabelKind.ZERO:
            return "Zero"
        if self.kind is LabelKind.IDENTITY:
            return f"Identity({self.alpha})"
        if self.kind is LabelKind.COEFFICIENT:
            return f"Coefficient({self.alpha}, {self.index})"
        return "Expression"


def _format_scaled(alpha: Scalar, body: str) -> str:
    """α·body written as 'body', '-body', 'body/2', '3body' or '(1+i)body'."""
    if alpha == 1:
        return body
    if alpha == -1:
        return f"-{body}"
    if alpha.is_real() and alpha.backend.exact:
        value = Fraction(alpha.re)
        if abs(value.numerator) == 1:
            return f"{'-' if value < 0 else ''}{body}/{value.denominator}"
        if value.denominator == 1:
            return f"{value}{body}"
        return f"({value}){body}"
    if alpha.re == 0 and alpha.backend.exact:
        return f"{alpha}{body}"
    return f"({alpha}){body}"


@dataclass(frozen=True)
class CoefficientExpr:
    """
    Σ α_w · w over words w in I (the empty word), P_j and P_j^⋆.

    Attributes:
        terms: (word, α) pairs with nonzero α, sorted by word.
        backend: Scalar backend of the α's.
        symbol: Family name of the coefficients the words refer to.
    """
    terms: Tuple[Tuple[Word, Scalar], ...]
    backend: Backend
    symbol: str = "P"

    # ------------------------------------------------------------------
    # Construction
    # ------------------------------------------------------------------

    @classmethod
    def from_dict(cls, data: Dict[Word, Scalar], backend: Backend, symbol: str = "P") -> "CoefficientExpr":
        terms = tuple(sorted(((w, a) for w, a in data.items() if not a.is_zero()),
                             key=lambda item: (len(item[0]), item[0])))
        return cls(terms, Backend(backend), symbol)

    @classmethod
    def zero(cls, backend: Backend = Backend.GAUSSIAN, symbol: str = "P") -> "CoefficientExpr":
        return cls((), Backend(backend), symbol)

    @classmethod
    def identity(cls, alpha=1, backend: Backend = Backend.GAUSSIAN, symbol: str = "P") -> "CoefficientExpr":
        return cls.from_dict({(): Scalar.of(alpha, backend)}, backend, symbol)

    @classmethod
    def coefficient(cls, j: int, alpha=1, backend: Backend = Backend.GAUSSIAN,
                    starred: bool = False, symbol: str = "P") -> "CoefficientExpr":
        return cls.from_dict({((j, starred),): Scalar.of(alpha, backend)}, backend, symbol)

    def as_dict(self) -> Dict[Word, Scalar]:
        return dict(self.terms)

    def _like(self, data: Dict[Word, Scalar]) -> "CoefficientExpr":
        return CoefficientExpr.from_dict(data, self.backend, self.symbol)

    # ------------------------------------------------------------------
    # Arithmetic
    # ------------------------------------------------------------------

    def is_zero(self) -> bool:
        return not self.terms

    def __add__(self, other: "CoefficientExpr") -> "CoefficientExpr":
        if not isinstance(other, CoefficientExpr):
            return NotImplemented
        data = self.as_dict()
        for w, a in other.terms:
            data[w] = data[w] + a if w in data else a
        return self._like(data)

    def __neg__(self) -> "CoefficientExpr":
        return CoefficientExpr(tuple((w, -a) for w, a in self.terms), self.backend, self.symbol)

    def __sub__(self, other: "CoefficientExpr") -> "CoefficientExpr":
        return self + (-other)

    def __mul__(self, other) -> "CoefficientExpr":
        if isinstance(other, CoefficientExpr):
            data: Dict[Word, Scalar] = {}
            for w1, a1 in self.terms:
                for w2, a2 in other.terms:
                    w = w1 + w2
                    data[w] = data[w] + a1 * a2 if w in data else a1 * a2
            return self._like(data)
        if isinstance(other, (Scalar, int, Fraction)):
            return self._like({w: a * other for w, a in self.terms})
        return NotImplemented

    def __rmul__(self, other) -> "CoefficientExpr":
        if isinstance(other, (Scalar, int, Fraction)):
            return self * other
        return NotImplemented

    def __eq__(self, other) -> bool:
        if not isinstance(other, CoefficientExpr):
            return NotImplemented
        return self.symbol == other.symbol and self.as_dict() == other.as_dict()

    def __hash__(self) -> int:
        return hash((self.symbol, self.terms))

    # ------------------------------------------------------------------
    # Involutions and substitutions
    # ------------------------------------------------------------------

    def star(self, flavor: StarFlavor) -> "CoefficientExpr":
        flavor = StarFlavor.parse(flavor)
        data: Dict[Word, Scalar] = {}
        for w, a in self.terms:
            starred = tuple((j, not s) for j, s in reversed(w))
            data[starred] = a.conj() if flavor is StarFlavor.CONJUGATE_TRANSPOSE else a
        return self._like(data)

    def substitute(self, relation: Callable[[int], Tuple[int, int]]) -> "CoefficientExpr":
        """
        Replace every P_j^⋆ by sign·P_j' where relation(j) = (sign, j').
        """
        result = CoefficientExpr.zero(self.backend, self.symbol)
        for w, a in self.terms:
            factor = a
            word = []
            for j, starred in w:
                if starred:
                    sign, target = relation(j)
                    factor = factor * sign
                    word.append((target, False))
                else:
                    word.append((j, False))
            result = result + self._like({tuple(word): factor})
        return result

    def has_stars(self) -> bool:
        return any(s for w, _ in self.terms for _, s in w)

    def is_polynomial_in(self, symbol: str, count: int) -> bool:
        """True when only I and unstarred symbol_0, ..., symbol_{count-1} occur."""
        return self.symbol == symbol and all(not s and 0 <= j < count for w, _ in self.terms for j, s in w)

    def is_linear(self) -> bool:
        """True when every word has length at most one."""
        return all(len(w) <= 1 for w, _ in self.terms)

    def rebase(self, transform: Matrix, symbol: str = "Q") -> "CoefficientExpr":
        """
        Rewrite P_i as Σ_j transform[i, j]·Q_j.

        Raises:
            MissingProvenance: If the expression is not linear in unstarred
                coefficients, which the rewrite cannot express.
        """
        data: Dict[Word, Scalar] = {}
        for w, a in self.terms:
            if not w:
                data[()] = data.get((), Scalar.zero(self.backend)) + a
                continue
            if len(w) != 1 or w[0][1]:
                raise MissingProvenance("Only linear, unstarred expressions can be re-based")
            i = w[0][0]
            for j in range(transform.cols):
                c = transform[i, j]
                if c.is_zero():
                    continue
                key = ((j, False),)
                data[key] = data.get(key, Scalar.zero(self.backend)) + a * c
        return CoefficientExpr.from_dict(data, self.backend, symbol)

    # ------------------------------------------------------------------
    # Evaluation and labels
    # ------------------------------------------------------------------

    def evaluate(self, coeffs: Sequence[Matrix], n: int, flavor: StarFlavor = StarFlavor.TRANSPOSE) -> Matrix:
        """
        Concrete n×n matrix of this expression for the given coefficients.

        Raises:
            ShapeMismatch: If a word references a missing coefficient.
        """
        result = Matrix.zeros(n, n, self.backend)
        for w, a in self.terms:
            value = Matrix.identity(n, self.backend)
            for j, starred in w:
                if j >= len(coeffs):
                    raise ShapeMismatch(f"{self.symbol}_{j} is not a coefficient of the source polynomial")
                factor = coeffs[j].star(flavor) if starred else coeffs[j]
                value = value @ factor
            result = result + value * a
        return result

    def label(self) -> ProvenanceLabel:
        if not self.terms:
            return ProvenanceLabel(LabelKind.ZERO)
        if len(self.terms) == 1:
            w, a = self.terms[0]
            if not w:
                return ProvenanceLabel(LabelKind.IDENTITY, alpha=a)
            if len(w) == 1 and not w[0][1]:
                return ProvenanceLabel(LabelKind.COEFFICIENT, alpha=a, index=w[0][0])
        return ProvenanceLabel(LabelKind.EXPRESSION)

    def coefficient_indices(self) -> Iterable[int]:
        return sorted({j for w, _ in self.terms for j, _ in w})

    def render(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for w, a in self.terms:
            body = "".join(f"{self.symbol}_{j}{'^⋆' if s else ''}" for j, s in w) or "I"
            parts.append(_format_scaled(a, body))
        text = parts[0]
        for part in parts[1:]:
            text += part if part.startswith("-") else f"+{part}"
        return text

    def __str__(self) -> str:
        return self.render()
