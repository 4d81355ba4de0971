########################
# Quartic Refuter      #
########################

"""
Exhaustive search for structured companion quadratifications of scalar
quartics.

A template is a 2×2 quadratic L(λ) = l_0 + λl_1 + λ²l_2 whose twelve slots
(l_i)_{s,t} hold 0, a constant β or β·p_j, with β from a finite grid. The
template must be structured like p: every slot is tied to a partner slot by
(l_i')_{s,t} = f·((l_i)_{t,s})^⋆. A template satisfies the search when
det L(λ) = α·p(λ) identically in the free coefficients of a structured p.

This is an empirical check over a finite grid, not a proof: a report with
satisfying_count 0 says that no template built from the grid works.

Key Features:
1. Structured Quartic Symbols:
   - the free coefficients of p after the structure relations are imposed:
     real symbols, conjugate pairs and forced zeros

2. Exact Checks:
   - determinant_coefficients() gives the five coefficient equations as
     exact multivariate polynomials; check_template() solves for α

3. Layered Search:
   - the λ^0 and λ^4 equations prune l_0 and l_2 by a sorted join, the
     λ^1 and λ^3 equations join l_1 against each survivor, the λ^2 equation
     finishes; joins compare fingerprints in GF(p), which never lose a true
     identity, and every match is re-checked exactly
   - allow_products lets one diagonal entry of l_1 be any polynomial in the
     coefficients, solved from the λ^2 equation

4. Reproducibility:
   - shuffle_seed permutes the enumeration order, partition splits the
     search, and RefutationReport.merge() adds partial reports
"""

from dataclasses import dataclass, field
from enum import Enum
from functools import lru_cache
import itertools
import logging
from typing import Dict, FrozenSet, Iterable, Iterator, List, Optional, Sequence, Tuple, Union

import numpy as np

from app.exceptions import EmptyGrid, StructureCheckFailed, UnsupportedMatrix
from app.lification_config import DEFAULT_GRID, parse_grid
from app.matrix import StarFlavor
from app.multivariate import PRIME, MultiPoly, scalar_mod
from app.scalar import Backend, Scalar, parse_scalar, promote
from app.structures import StructureKind, StructureTag

GRADE = 4

PowerSlot = Tuple[int, int, int]
SLOTS: Tuple[PowerSlot, ...] = tuple((i, s, t) for i in range(3) for s in (1, 2) for t in (1, 2))


def _one() -> Scalar:
    return Scalar.one(Backend.GAUSSIAN)


def _tag(structure: Union[StructureTag, str]) -> StructureTag:
    return structure if isinstance(structure, StructureTag) else StructureTag.parse(structure)


# ----------------------------------------------------------------------
# Symbols of a structured quartic
# ----------------------------------------------------------------------

@dataclass
class QuarticSymbols:
    """
    Free symbols of a structured scalar quartic p = Σ λ^j p_j.

    Attributes:
        structure: Structure imposed on p.
        names: Variable names.
        partner: partner[k] is the variable conjugate to variable k.
        coefficients: p_0, ..., p_4 as linear forms in the variables.
    """
    structure: StructureTag
    names: List[str]
    partner: List[int]
    coefficients: List[MultiPoly]

    @property
    def nvars(self) -> int:
        return len(self.names)

    @property
    def hermitian(self) -> bool:
        return self.structure.flavor is StarFlavor.CONJUGATE_TRANSPOSE

    @property
    def degenerate(self) -> bool:
        """True when the structure forces p ≡ 0."""
        return all(c.is_zero() for c in self.coefficients)

    @property
    def nonzero(self) -> List[int]:
        return [j for j, c in enumerate(self.coefficients) if not c.is_zero()]

    def star(self, poly: MultiPoly) -> MultiPoly:
        return poly.conjugate(self.partner) if self.hermitian else poly

    def star_scalar(self, x: Scalar) -> Scalar:
        return x.conj() if self.hermitian else x


@lru_cache(maxsize=None)
def quartic_symbols(structure: StructureTag) -> QuarticSymbols:
    """
    Solve the relations P_j^⋆ = ±P_j' of a structured quartic for free symbols.

    Paired coefficients share one symbol (and its conjugate for ⋆ = H);
    a self-paired coefficient is a free symbol, a real symbol, i times a
    real symbol, or zero.
    """
    hermitian = structure.flavor is StarFlavor.CONJUGATE_TRANSPOSE
    names: List[str] = []
    partner: List[int] = []
    forms: Dict[int, Tuple[Optional[int], Scalar]] = {}

    def new_variable(name: str, conjugate_of: Optional[int] = None) -> int:
        k = len(names)
        names.append(name)
        partner.append(k if conjugate_of is None else conjugate_of)
        if conjugate_of is not None:
            partner[conjugate_of] = k
        return k

    for j in range(GRADE + 1):
        if j in forms:
            continue
        sigma, mate = structure.coefficient_relation(j, GRADE)
        if mate == j:
            if sigma > 0:
                forms[j] = (new_variable(f"p{j}"), _one())
            elif hermitian:
                forms[j] = (new_variable(f"im(p{j})"), Scalar.gaussian(0, 1))
            else:
                forms[j] = (None, Scalar.zero(Backend.GAUSSIAN))
            continue
        k = new_variable(f"p{j}")
        forms[j] = (k, _one())
        if hermitian:
            forms[mate] = (new_variable(f"conj(p{j})", conjugate_of=k), Scalar.of(sigma, Backend.GAUSSIAN))
        else:
            forms[mate] = (k, Scalar.of(sigma, Backend.GAUSSIAN))
    nvars = len(names)
    coefficients = [
        MultiPoly.zero(nvars) if forms[j][0] is None else MultiPoly.variable(forms[j][0], nvars, forms[j][1])
        for j in range(GRADE + 1)
    ]
    return QuarticSymbols(structure, names, partner, coefficients)


# ----------------------------------------------------------------------
# Slots and templates
# ----------------------------------------------------------------------

class SlotKind(str, Enum):
    ZERO = "zero"
    CONSTANT = "constant"
    COEFFICIENT = "coefficient"
    PRODUCT = "product"


@dataclass(frozen=True)
class Slot:
    """Content of one (l_i)_{s,t}."""
    kind: SlotKind
    beta: Scalar = field(default_factory=_one)
    j: Optional[int] = None
    expr: Optional[MultiPoly] = None

    @classmethod
    def zero(cls) -> "Slot":
        return cls(SlotKind.ZERO, Scalar.zero(Backend.GAUSSIAN))

    @classmethod
    def constant(cls, beta) -> "Slot":
        return cls(SlotKind.CONSTANT, promote(Scalar.of(beta, Backend.GAUSSIAN), Backend.GAUSSIAN))

    @classmethod
    def coefficient(cls, beta, j: int) -> "Slot":
        return cls(SlotKind.COEFFICIENT, promote(Scalar.of(beta, Backend.GAUSSIAN), Backend.GAUSSIAN), j)

    @classmethod
    def product(cls, expr: MultiPoly) -> "Slot":
        return cls(SlotKind.PRODUCT, _one(), None, expr)

    def value(self, symbols: QuarticSymbols) -> MultiPoly:
        if self.kind is SlotKind.ZERO:
            return MultiPoly.zero(symbols.nvars)
        if self.kind is SlotKind.CONSTANT:
            return MultiPoly.constant(self.beta, symbols.nvars)
        if self.kind is SlotKind.COEFFICIENT:
            return symbols.coefficients[self.j] * self.beta
        return self.expr

    def mirrored(self, symbols: QuarticSymbols, factor: int) -> "Slot":
        """The slot f·(this)^⋆, written again as a slot."""
        if self.kind is SlotKind.ZERO:
            return self
        beta = symbols.star_scalar(self.beta) * factor
        if self.kind is SlotKind.CONSTANT:
            return Slot.constant(beta)
        if self.kind is SlotKind.COEFFICIENT:
            sigma, mate = symbols.structure.coefficient_relation(self.j, GRADE)
            return Slot.coefficient(beta * sigma, mate)
        return Slot.product(symbols.star(self.expr) * factor)

    def render(self, symbols: QuarticSymbols) -> str:
        if self.kind is SlotKind.ZERO:
            return "0"
        if self.kind is SlotKind.CONSTANT:
            return str(self.beta)
        if self.kind is SlotKind.PRODUCT:
            return f"({self.expr.render(symbols.names)})"
        if self.beta == 1:
            return f"p{self.j}"
        if self.beta == -1:
            return f"-p{self.j}"
        return f"{self.beta}*p{self.j}" if self.beta.is_real() else f"({self.beta})*p{self.j}"


def slot_partner(structure: StructureTag, slot: PowerSlot) -> Tuple[PowerSlot, int]:
    """(partner slot, f) with (l_i')_{s,t} = f·((l_i)_{t,s})^⋆ for a structured L of grade 2."""
    i, s, t = slot
    if structure.mobius_name == "A1":
        return (i, t, s), structure.sign
    if structure.mobius_name == "A2":
        return (i, t, s), structure.sign * (-1) ** i
    return (2 - i, t, s), structure.sign


@dataclass
class CompanionTemplate:
    """
    A scalar 2×2 quadratic template.

    Attributes:
        structure: Structure shared by p and L.
        entries: Slot contents; missing slots are zero.
        alphas: Accepted values of α in det L = α·p; None accepts any nonzero α.
    """
    structure: StructureTag
    entries: Dict[PowerSlot, Slot] = field(default_factory=dict)
    alphas: Optional[FrozenSet[Scalar]] = None

    @classmethod
    def build(cls, structure: Union[StructureTag, str], entries: Dict[PowerSlot, Slot],
              alphas: Optional[Iterable] = None) -> "CompanionTemplate":
        """
        Raises:
            StructureCheckFailed: If a slot and its partner disagree.
        """
        tag = _tag(structure)
        accepted = None if alphas is None else frozenset(Scalar.of(a, Backend.GAUSSIAN) for a in alphas)
        template = cls(tag, dict(entries), accepted)
        broken = template.violations()
        if broken:
            raise StructureCheckFailed(f"Template is not {tag}: slots {broken} break the structure")
        return template

    def entry(self, i: int, s: int, t: int) -> Slot:
        return self.entries.get((i, s, t), Slot.zero())

    def value(self, slot: PowerSlot, symbols: Optional[QuarticSymbols] = None) -> MultiPoly:
        symbols = symbols or quartic_symbols(self.structure)
        return self.entry(*slot).value(symbols)

    def violations(self, symbols: Optional[QuarticSymbols] = None) -> List[PowerSlot]:
        """Slots whose value differs from f·(partner value)^⋆."""
        symbols = symbols or quartic_symbols(self.structure)
        broken = []
        for slot in SLOTS:
            mate, factor = slot_partner(self.structure, slot)
            if self.value(mate, symbols) != symbols.star(self.value(slot, symbols)) * factor:
                broken.append(slot)
        return broken

    def render(self, symbols: Optional[QuarticSymbols] = None) -> str:
        symbols = symbols or quartic_symbols(self.structure)
        layers = []
        for i in range(3):
            cells = [[self.entry(i, s, t).render(symbols) for t in (1, 2)] for s in (1, 2)]
            layers.append(f"l_{i} = [[{cells[0][0]}, {cells[0][1]}], [{cells[1][0]}, {cells[1][1]}]]")
        return "; ".join(layers)

    def to_dict(self) -> dict:
        symbols = quartic_symbols(self.structure)
        return {
            "structure": self.structure.label,
            "alphas": None if self.alphas is None else sorted(str(a) for a in self.alphas),
            "entries": [
                {"i": i, "s": s, "t": t, "kind": self.entry(i, s, t).kind.value,
                 "value": self.entry(i, s, t).render(symbols)}
                for (i, s, t) in SLOTS
            ],
            "text": self.render(symbols),
        }


# ----------------------------------------------------------------------
# Exact checks
# ----------------------------------------------------------------------

def determinant_coefficients(template: CompanionTemplate,
                             symbols: Optional[QuarticSymbols] = None) -> List[MultiPoly]:
    """
    Coefficients of λ^0, ..., λ^4 in det L(λ):
    D_m = Σ_{a+b=m} (l_a)_{1,1}(l_b)_{2,2} - (l_a)_{1,2}(l_b)_{2,1}.
    """
    symbols = symbols or quartic_symbols(template.structure)
    v = {slot: template.value(slot, symbols) for slot in SLOTS}
    coefficients = []
    for m in range(GRADE + 1):
        total = MultiPoly.zero(symbols.nvars)
        for a in range(max(0, m - 2), min(2, m) + 1):
            b = m - a
            total = total + v[(a, 1, 1)] * v[(b, 2, 2)] - v[(a, 1, 2)] * v[(b, 2, 1)]
        coefficients.append(total)
    return coefficients


def solve_alpha(template: CompanionTemplate, symbols: Optional[QuarticSymbols] = None) -> Optional[Scalar]:
    """α with det L = α·p identically, or None (also for a degenerate p)."""
    symbols = symbols or quartic_symbols(template.structure)
    if symbols.degenerate:
        return None
    D = determinant_coefficients(template, symbols)
    m = symbols.nonzero[0]
    alpha = D[m].ratio_to(symbols.coefficients[m])
    if alpha is None or alpha.is_zero():
        return None
    if all(D[j] == symbols.coefficients[j] * alpha for j in range(GRADE + 1)):
        return alpha
    return None


def check_template(template: CompanionTemplate, symbols: Optional[QuarticSymbols] = None) -> bool:
    """True iff det L ≡ α·p for some accepted α."""
    alpha = solve_alpha(template, symbols)
    if alpha is None:
        return False
    return template.alphas is None or alpha in template.alphas


# ----------------------------------------------------------------------
# Grids and enumeration
# ----------------------------------------------------------------------

def _grid_scalars(grid: Optional[Iterable]) -> List[Scalar]:
    if grid is None:
        grid = parse_grid(DEFAULT_GRID)
    values: List[Scalar] = []
    for g in grid:
        x = parse_scalar(g, Backend.GAUSSIAN) if isinstance(g, str) else promote(Scalar.of(g, Backend.GAUSSIAN),
                                                                                 Backend.GAUSSIAN)
        if not x.is_zero() and x not in values:
            values.append(x)
    return values


def search_betas(grid: Optional[Iterable], flavor=StarFlavor.TRANSPOSE) -> List[Scalar]:
    """
    Nonzero grid values used as β; for ⋆ = H the grid is closed under
    multiplication by i so Hermitian-constrained slots can be imaginary.

    Raises:
        EmptyGrid: If the grid has no nonzero value.
    """
    values = _grid_scalars(grid)
    if not values:
        raise EmptyGrid("The refuter grid has no nonzero value")
    if StarFlavor.parse(flavor) is StarFlavor.CONJUGATE_TRANSPOSE:
        for x in list(values):
            y = x * Scalar.gaussian(0, 1)
            if y not in values:
                values.append(y)
    return values


def alpha_candidates(betas: Sequence[Scalar]) -> FrozenSet[Scalar]:
    """The grid together with all products of two grid values."""
    values = set(betas)
    values.update(a * b for a in betas for b in betas)
    return frozenset(v for v in values if not v.is_zero())


@dataclass
class _Orbit:
    rep: PowerSlot
    mate: PowerSlot
    factor: int
    options: List[Tuple[Slot, Slot]]


def _build_orbits(structure: StructureTag, symbols: QuarticSymbols, betas: Sequence[Scalar],
                  skip: Optional[PowerSlot] = None, constants_only: Optional[PowerSlot] = None) -> List[_Orbit]:
    raw = [Slot.zero()] + [Slot.constant(b) for b in betas]
    raw += [Slot.coefficient(b, j) for j in symbols.nonzero for b in betas]
    covered = set()
    orbits = []
    for slot in SLOTS:
        if slot in covered:
            continue
        mate, factor = slot_partner(structure, slot)
        covered.update({slot, mate})
        if slot == skip:
            continue
        options = []
        for option in raw:
            if slot == constants_only and option.kind is not SlotKind.CONSTANT:
                continue
            mirrored = option.mirrored(symbols, factor)
            if mate == slot:
                if option.value(symbols) != mirrored.value(symbols):
                    continue
                mirrored = option
            options.append((option, mirrored))
        orbits.append(_Orbit(slot, mate, factor, options))
    return orbits


def _arrange(orbits: List[_Orbit], shuffle_seed: Optional[int], partition: Tuple[int, int]) -> List[_Orbit]:
    part, parts = partition
    if parts < 1 or not 0 <= part < parts:
        raise ValueError(f"Invalid partition {part} of {parts}")
    if shuffle_seed is not None:
        rng = np.random.default_rng(shuffle_seed)
        for orbit in orbits:
            orbit.options = [orbit.options[k] for k in rng.permutation(len(orbit.options))]
    orbits[0].options = orbits[0].options[part::parts]
    return orbits


def _count(orbits: Sequence[_Orbit]) -> int:
    total = 1
    for orbit in orbits:
        total *= len(orbit.options)
    return total


def _template_from(structure: StructureTag, orbits: Sequence[_Orbit], choice: Dict[int, int],
                   alphas: Optional[FrozenSet[Scalar]]) -> CompanionTemplate:
    entries = {}
    for k, index in choice.items():
        first, second = orbits[k].options[index]
        entries[orbits[k].rep] = first
        entries[orbits[k].mate] = second
    return CompanionTemplate(structure, entries, alphas)


_PRODUCT_VARIANTS = (((1, 1, 1), (1, 2, 2)), ((1, 2, 2), (1, 1, 1)))


def template_count(structure: Union[StructureTag, str], grid: Optional[Iterable] = None,
                   allow_products: bool = False, partition: Tuple[int, int] = (0, 1)) -> int:
    """Closed-form size of the search space: the product of option counts per slot orbit."""
    tag = _tag(structure)
    symbols = quartic_symbols(tag)
    betas = search_betas(grid, tag.flavor)
    total = _count(_arrange(_build_orbits(tag, symbols, betas), None, partition))
    if allow_products:
        for product_slot, other in _PRODUCT_VARIANTS:
            orbits = _build_orbits(tag, symbols, betas, skip=product_slot, constants_only=other)
            total += _count(_arrange(orbits, None, partition))
    return total


def enumerate_templates(structure: Union[StructureTag, str], grid: Optional[Iterable] = None,
                        shuffle_seed: Optional[int] = None) -> Iterator[CompanionTemplate]:
    """
    Stream every structured template over the grid, dependent slots derived.

    Raises:
        EmptyGrid: If the grid has no nonzero value.
    """
    tag = _tag(structure)
    symbols = quartic_symbols(tag)
    betas = search_betas(grid, tag.flavor)
    alphas = alpha_candidates(betas)
    orbits = _arrange(_build_orbits(tag, symbols, betas), shuffle_seed, (0, 1))

    def stream() -> Iterator[CompanionTemplate]:
        for indices in itertools.product(*[range(len(o.options)) for o in orbits]):
            yield _template_from(tag, orbits, dict(enumerate(indices)), alphas)

    return stream()


def generalized_palindromic_template(structure: Union[StructureTag, str] = "palindromic") -> CompanionTemplate:
    """
    l_0 = [p1, 1; p0, 0], l_1 = [p2 - 1 - p0·p4, 0; 0, -1], l_2 = [p3, p4; 1, 0],
    a ⋆-palindromic quadratification with det L = -p whose (1,1) entry of l_1 is
    a product of coefficients.

    Raises:
        UnsupportedMatrix: For structures other than palindromic.
    """
    tag = _tag(structure)
    if tag.kind is not StructureKind.PALINDROMIC:
        raise UnsupportedMatrix(f"The generalized quartic template is palindromic, not {tag}")
    symbols = quartic_symbols(tag)
    p = symbols.coefficients
    middle = p[2] - 1 - p[0] * p[4]
    entries = {
        (0, 1, 1): Slot.coefficient(1, 1), (0, 1, 2): Slot.constant(1),
        (0, 2, 1): Slot.coefficient(1, 0),
        (1, 1, 1): Slot.product(middle), (1, 2, 2): Slot.constant(-1),
        (2, 1, 1): Slot.coefficient(1, 3), (2, 1, 2): Slot.coefficient(1, 4),
        (2, 2, 1): Slot.constant(1),
    }
    return CompanionTemplate.build(tag, entries, alphas=[-1])


# ----------------------------------------------------------------------
# Search
# ----------------------------------------------------------------------

def _equal_pairs(left: np.ndarray, right: np.ndarray) -> Iterator[Tuple[int, int]]:
    """All (i, j) with left[i] == right[j]."""
    order = np.argsort(right, kind="stable")
    ordered = right[order]
    lo = np.searchsorted(ordered, left, side="left")
    hi = np.searchsorted(ordered, left, side="right")
    for i in np.nonzero(hi > lo)[0]:
        for k in range(lo[i], hi[i]):
            yield int(i), int(order[k])


class _TemplateSearch:
    """One pass over the templates of a structure, optionally with a product slot."""

    def __init__(self, structure: StructureTag, symbols: QuarticSymbols, betas: Sequence[Scalar],
                 alphas: FrozenSet[Scalar], shuffle_seed: Optional[int], partition: Tuple[int, int],
                 fingerprint_seed: int):
        self.structure = structure
        self.symbols = symbols
        self.betas = list(betas)
        self.alphas = alphas
        self.shuffle_seed = shuffle_seed
        self.partition = partition
        rng = np.random.default_rng(fingerprint_seed)
        self.point = [int(x) for x in rng.integers(1, PRIME, size=max(symbols.nvars, 1))]
        self.p_fp = [c.evaluate_mod(self.point) for c in symbols.coefficients]
        self.found: List[CompanionTemplate] = []
        self.exact_checks = 0

    def _fingerprint(self, slot: Slot) -> int:
        if slot.kind is SlotKind.ZERO:
            return 0
        if slot.kind is SlotKind.CONSTANT:
            return scalar_mod(slot.beta)
        if slot.kind is SlotKind.COEFFICIENT:
            return scalar_mod(slot.beta) * self.p_fp[slot.j] % PRIME
        return slot.expr.evaluate_mod(self.point)

    def _prepare(self, skip: Optional[PowerSlot], constants_only: Optional[PowerSlot]) -> None:
        orbits = _build_orbits(self.structure, self.symbols, self.betas, skip, constants_only)
        self.orbits = _arrange(orbits, self.shuffle_seed, self.partition)
        self.source: Dict[PowerSlot, Tuple[int, int]] = {}
        self.tables: List[np.ndarray] = []
        for k, orbit in enumerate(self.orbits):
            self.source[orbit.mate] = (k, 1)
            self.source[orbit.rep] = (k, 0)
            self.tables.append(np.array(
                [[self._fingerprint(a) for a, _ in orbit.options], [self._fingerprint(b) for _, b in orbit.options]],
                dtype=np.int64,
            ).reshape(2, len(orbit.options)))

    def _orbits_of(self, slots: Sequence[PowerSlot]) -> List[int]:
        return sorted({self.source[s][0] for s in slots if s in self.source})

    def _combos(self, orbit_ids: List[int]) -> np.ndarray:
        if not orbit_ids:
            return np.zeros((1, 0), dtype=np.int64)
        grids = np.meshgrid(*[np.arange(len(self.orbits[k].options)) for k in orbit_ids], indexing="ij")
        return np.stack([g.ravel() for g in grids], axis=1)

    def _vector(self, slot: PowerSlot, orbit_ids: List[int], combos: np.ndarray) -> np.ndarray:
        k, row = self.source[slot]
        return self.tables[k][row][combos[:, orbit_ids.index(k)]]

    def _fp(self, slot: PowerSlot, choice: Dict[int, int]) -> int:
        k, row = self.source[slot]
        return int(self.tables[k][row][choice[k]])

    def _layer_candidates(self, layer: int, target: int) -> List[Dict[int, int]]:
        """Choices for the orbits of l_layer with det l_layer ≡ target."""
        diag_ids = self._orbits_of([(layer, 1, 1), (layer, 2, 2)])
        off_ids = self._orbits_of([(layer, 1, 2), (layer, 2, 1)])
        left, right = self._combos(diag_ids), self._combos(off_ids)
        a = self._vector((layer, 1, 1), diag_ids, left)
        c = self._vector((layer, 2, 2), diag_ids, left)
        b = self._vector((layer, 1, 2), off_ids, right)
        e = self._vector((layer, 2, 1), off_ids, right)
        lhs = (a * c % PRIME - target) % PRIME
        rhs = b * e % PRIME
        out = []
        for i, j in _equal_pairs(lhs, rhs):
            choice = {k: int(left[i, n]) for n, k in enumerate(diag_ids)}
            choice.update({k: int(right[j, n]) for n, k in enumerate(off_ids)})
            out.append(choice)
        return out

    def _det_fp(self, layer: int, choice: Dict[int, int]) -> int:
        f = lambda s, t: self._fp((layer, s, t), choice)  # noqa: E731
        return (f(1, 1) * f(2, 2) - f(1, 2) * f(2, 1)) % PRIME

    def _outer(self, alpha_fp: int) -> Iterator[Dict[int, int]]:
        """Choices for every orbit touching l_0 or l_2 that pass the λ^0 and λ^4 equations."""
        first = self._layer_candidates(0, alpha_fp * self.p_fp[0] % PRIME)
        layer0 = set(self._orbits_of([(0, s, t) for s in (1, 2) for t in (1, 2)]))
        layer2 = set(self._orbits_of([(2, s, t) for s in (1, 2) for t in (1, 2)]))
        target4 = alpha_fp * self.p_fp[4] % PRIME
        if layer2 <= layer0:
            for choice in first:
                if self._det_fp(2, choice) == target4:
                    yield choice
            return
        second = self._layer_candidates(2, target4)
        for x in first:
            for y in second:
                yield {**x, **y}

    def _outer_values(self, choice: Dict[int, int]) -> Tuple[int, ...]:
        return tuple(self._fp(slot, choice) for slot in
                     ((0, 1, 1), (0, 1, 2), (0, 2, 1), (0, 2, 2), (2, 1, 1), (2, 1, 2), (2, 2, 1), (2, 2, 2)))

    def _record(self, template: CompanionTemplate) -> bool:
        self.exact_checks += 1
        if template.violations(self.symbols) or not check_template(template, self.symbols):
            return False
        self.found.append(template)
        return True

    def run_plain(self) -> int:
        """Search templates built only from grid slots; returns the number tested."""
        self._prepare(None, None)
        mid_ids = self._orbits_of([(1, 1, 1), (1, 2, 2)])
        off_ids = self._orbits_of([(1, 1, 2), (1, 2, 1)])
        D, O = self._combos(mid_ids), self._combos(off_ids)
        d1, d2 = self._vector((1, 1, 1), mid_ids, D), self._vector((1, 2, 2), mid_ids, D)
        o12, o21 = self._vector((1, 1, 2), off_ids, O), self._vector((1, 2, 1), off_ids, O)
        for alpha in sorted(self.alphas, key=lambda x: (x.re, x.im)):
            afp = scalar_mod(alpha)
            ap = [afp * x % PRIME for x in self.p_fp]
            for choice in self._outer(afp):
                a0, b0, e0, c0, a2, b2, e2, c2 = self._outer_values(choice)
                cross = (a0 * c2 + a2 * c0 - b0 * e2 - b2 * e0) % PRIME
                left = ((c0 * d1 % PRIME + a0 * d2 % PRIME) % PRIME) * PRIME \
                    + (c2 * d1 % PRIME + a2 * d2 % PRIME) % PRIME
                t1 = (ap[1] + b0 * o21 % PRIME + o12 * e0 % PRIME) % PRIME
                t3 = (ap[3] + o12 * e2 % PRIME + b2 * o21 % PRIME) % PRIME
                for oi, di in _equal_pairs(t1 * PRIME + t3, left):
                    middle = (int(d1[di]) * int(d2[di]) - int(o12[oi]) * int(o21[oi]) + cross) % PRIME
                    if middle != ap[2]:
                        continue
                    full = dict(choice)
                    full.update({k: int(D[di, n]) for n, k in enumerate(mid_ids)})
                    full.update({k: int(O[oi, n]) for n, k in enumerate(off_ids)})
                    self._record(_template_from(self.structure, self.orbits, full, self.alphas))
        return _count(self.orbits)

    def run_product(self, product_slot: PowerSlot, other: PowerSlot) -> int:
        """Search with product_slot solved from the λ^2 equation and other a nonzero constant."""
        self._prepare(product_slot, other)
        ids = self._orbits_of([other, (1, 1, 2), (1, 2, 1)])
        G = self._combos(ids)
        dq = self._vector(other, ids, G)
        o12, o21 = self._vector((1, 1, 2), ids, G), self._vector((1, 2, 1), ids, G)
        inverse = np.array([pow(int(x), PRIME - 2, PRIME) for x in dq], dtype=np.int64)
        p = self.symbols.coefficients
        for alpha in sorted(self.alphas, key=lambda x: (x.re, x.im)):
            afp = scalar_mod(alpha)
            ap = [afp * x % PRIME for x in self.p_fp]
            for choice in self._outer(afp):
                a0, b0, e0, c0, a2, b2, e2, c2 = self._outer_values(choice)
                cross = (a0 * c2 + a2 * c0 - b0 * e2 - b2 * e0) % PRIME
                solved = ((ap[2] - cross) % PRIME + o12 * o21 % PRIME) % PRIME * inverse % PRIME
                d1, d2 = (solved, dq) if product_slot == (1, 1, 1) else (dq, solved)
                e1 = (a0 * d2 % PRIME + d1 * c0 % PRIME - b0 * o21 % PRIME - o12 * e0 % PRIME) % PRIME
                e3 = (d1 * c2 % PRIME + a2 * d2 % PRIME - o12 * e2 % PRIME - b2 * o21 % PRIME) % PRIME
                for gi in np.nonzero((e1 == ap[1]) & (e3 == ap[3]))[0]:
                    full = dict(choice)
                    full.update({k: int(G[gi, n]) for n, k in enumerate(ids)})
                    template = _template_from(self.structure, self.orbits, full, self.alphas)
                    v = {slot: template.value(slot, self.symbols) for slot in SLOTS if slot != product_slot}
                    exact_cross = v[(0, 1, 1)] * v[(2, 2, 2)] + v[(2, 1, 1)] * v[(0, 2, 2)] \
                        - v[(0, 1, 2)] * v[(2, 2, 1)] - v[(2, 1, 2)] * v[(0, 2, 1)]
                    expr = (p[2] * alpha - exact_cross + v[(1, 1, 2)] * v[(1, 2, 1)]) / v[other].constant_term()
                    template.entries[product_slot] = Slot.product(expr)
                    self._record(template)
        return _count(self.orbits)


# ----------------------------------------------------------------------
# Reports
# ----------------------------------------------------------------------

@dataclass
class RefutationReport:
    """
    Outcome of a (partial) refuter run.

    Attributes:
        structure: Structure label.
        grid: Grid values as text.
        allow_products: Whether product slots were searched.
        templates_tested: Size of the searched template space.
        satisfying_count: Templates with det L ≡ α·p.
        degenerate: The structure forces p ≡ 0, so nothing was searched.
        witnesses: Satisfying templates, sorted by their text form.
        shuffle_seed: Enumeration order seed, None for the natural order.
        partitions: (part, parts) pairs covered by this report.
    """
    structure: str
    grid: List[str]
    allow_products: bool = False
    templates_tested: int = 0
    satisfying_count: int = 0
    degenerate: bool = False
    witnesses: List[CompanionTemplate] = field(default_factory=list)
    shuffle_seed: Optional[int] = None
    partitions: List[Tuple[int, int]] = field(default_factory=list)

    @property
    def refuted(self) -> bool:
        return not self.degenerate and self.satisfying_count == 0

    def merge(self, other: "RefutationReport") -> "RefutationReport":
        """
        Combine two partial reports of the same search.

        Raises:
            ValueError: If the reports belong to different searches.
        """
        if (self.structure, self.grid, self.allow_products) != (other.structure, other.grid, other.allow_products):
            raise ValueError("Cannot merge reports of different searches")
        return RefutationReport(
            structure=self.structure,
            grid=list(self.grid),
            allow_products=self.allow_products,
            templates_tested=self.templates_tested + other.templates_tested,
            satisfying_count=self.satisfying_count + other.satisfying_count,
            degenerate=self.degenerate or other.degenerate,
            witnesses=sorted(self.witnesses + other.witnesses, key=lambda t: t.render()),
            shuffle_seed=self.shuffle_seed if self.shuffle_seed == other.shuffle_seed else None,
            partitions=sorted(self.partitions + other.partitions),
        )

    def to_dict(self) -> dict:
        return {
            "structure": self.structure,
            "grid": list(self.grid),
            "allow_products": self.allow_products,
            "templates_tested": self.templates_tested,
            "satisfying_count": self.satisfying_count,
            "degenerate": self.degenerate,
            "refuted": self.refuted,
            "shuffle_seed": self.shuffle_seed,
            "partitions": [list(p) for p in self.partitions],
            "witnesses": [w.to_dict() for w in self.witnesses],
        }


def refute(structure: Union[StructureTag, str], grid: Optional[Iterable] = None, allow_products: bool = False,
           shuffle_seed: Optional[int] = None, partition: Tuple[int, int] = (0, 1), max_witnesses: int = 20,
           fingerprint_seed: int = 0) -> RefutationReport:
    """
    Search every structured template over the grid for det L ≡ α·p.

    Args:
        structure: Structure of p and L.
        grid: β values, the configured default grid when None.
        allow_products: Also search templates with one product slot in l_1.
        shuffle_seed: Permute the enumeration order.
        partition: (part, parts) to search one share of the space.
        max_witnesses: Largest number of satisfying templates kept.
        fingerprint_seed: Seed of the evaluation point used for pruning.

    Returns:
        RefutationReport: Counts and witnesses.

    Raises:
        EmptyGrid: If the grid has no nonzero value.
    """
    tag = _tag(structure)
    betas = search_betas(grid, tag.flavor)
    alphas = alpha_candidates(betas)
    symbols = quartic_symbols(tag)
    report = RefutationReport(
        structure=tag.label,
        grid=[str(x) for x in _grid_scalars(grid)],
        allow_products=allow_products,
        shuffle_seed=shuffle_seed,
        partitions=[tuple(partition)],
    )
    if symbols.degenerate:
        report.degenerate = True
        report.templates_tested = template_count(tag, grid, allow_products, partition)
        logging.warning(f"{tag} forces p ≡ 0; the quartic search is degenerate")
        return report
    search = _TemplateSearch(tag, symbols, betas, alphas, shuffle_seed, tuple(partition), fingerprint_seed)
    tested = search.run_plain()
    if allow_products:
        for product_slot, other in _PRODUCT_VARIANTS:
            tested += search.run_product(product_slot, other)
    witnesses = sorted(search.found, key=lambda t: t.render(symbols))
    report.templates_tested = tested
    report.satisfying_count = len(witnesses)
    report.witnesses = witnesses[:max_witnesses]
    logging.info(f"Refuter {tag} over {len(betas)} grid values: {tested} templates, "
                 f"{report.satisfying_count} satisfying, {search.exact_checks} exact checks")
    if report.satisfying_count and not allow_products:
        logging.warning(f"Refuter found {report.satisfying_count} structured companion templates for {tag}")
    return report
