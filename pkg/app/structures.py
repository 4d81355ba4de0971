########################
# Structure Tags       #
########################

"""
This module names the six structures handled by the workbench and everything
derived from a structure: its sign, its Möbius matrix, the placement
condition for the top-left block, and the relation between P_j^⋆ and the
coefficients of P.

Key Features:
1. StructureTag:
   - kind ∈ {symmetric, skew, even, odd, palindromic, antipalindromic}
   - flavor ∈ {T, H}
   - parse() accepts "T-symmetric", "H-palin", "sym", "palindromic:H"

2. Derived Data:
   - sign (+1 or -1) and Möbius matrix A1, A2 or A3
   - ConditionKind AS, ASS or DS for a given ℓ
   - coefficient_relation(j, k) giving P_j^⋆ = sign·P_j'

3. Reverse Lookup:
   - from_mobius(A, sign, flavor) recovers the tag when A is one of A1, A2, A3
"""

from dataclasses import dataclass
from enum import Enum
from typing import Optional, Tuple

from app.exceptions import ParseError, UnsupportedMatrix
from app.matrix import StarFlavor
from app.mobius import MobiusMatrix
from app.scalar import Backend


class ConditionKind(str, Enum):
    """Placement conditions for the top-left block M of a block-Kronecker lification."""
    AS = "AS"
    ASS = "ASS"
    DS = "DS"


class StructureKind(str, Enum):
    SYMMETRIC = "symmetric"
    SKEW = "skew"
    EVEN = "even"
    ODD = "odd"
    PALINDROMIC = "palindromic"
    ANTI_PALINDROMIC = "antipalindromic"


_ALIASES = {
    "sym": StructureKind.SYMMETRIC,
    "symmetric": StructureKind.SYMMETRIC,
    "hermitian": StructureKind.SYMMETRIC,
    "skew": StructureKind.SKEW,
    "skew-symmetric": StructureKind.SKEW,
    "skew-hermitian": StructureKind.SKEW,
    "even": StructureKind.EVEN,
    "odd": StructureKind.ODD,
    "palin": StructureKind.PALINDROMIC,
    "palindromic": StructureKind.PALINDROMIC,
    "antipalin": StructureKind.ANTI_PALINDROMIC,
    "anti-palin": StructureKind.ANTI_PALINDROMIC,
    "antipalindromic": StructureKind.ANTI_PALINDROMIC,
    "anti-palindromic": StructureKind.ANTI_PALINDROMIC,
}

_MOBIUS_NAME = {
    StructureKind.SYMMETRIC: "A1", StructureKind.SKEW: "A1",
    StructureKind.EVEN: "A2", StructureKind.ODD: "A2",
    StructureKind.PALINDROMIC: "A3", StructureKind.ANTI_PALINDROMIC: "A3",
}

_NEGATIVE = {StructureKind.SKEW, StructureKind.ODD, StructureKind.ANTI_PALINDROMIC}

_BY_MATRIX = {
    ("A1", 1): StructureKind.SYMMETRIC, ("A1", -1): StructureKind.SKEW,
    ("A2", 1): StructureKind.EVEN, ("A2", -1): StructureKind.ODD,
    ("A3", 1): StructureKind.PALINDROMIC, ("A3", -1): StructureKind.ANTI_PALINDROMIC,
}


def canonical_mobius_name(A: MobiusMatrix) -> Optional[str]:
    """'A1', 'A2' or 'A3' when A has exactly those entries, otherwise None."""
    for name in ("A1", "A2", "A3"):
        if A.same_entries(MobiusMatrix.named(name, A.backend)):
            return name
    return None


def condition_for(A: MobiusMatrix, ell: int) -> ConditionKind:
    """
    Condition the top-left block must satisfy for M_A-structured lifications.

    Raises:
        UnsupportedMatrix: If A is not A1, A2 or A3.
    """
    name = canonical_mobius_name(A)
    if name == "A1":
        return ConditionKind.AS
    if name == "A2":
        return ConditionKind.AS if ell % 2 == 0 else ConditionKind.ASS
    if name == "A3":
        return ConditionKind.DS
    raise UnsupportedMatrix(f"No placement condition is known for Möbius matrix {A}")


@dataclass(frozen=True)
class StructureTag:
    """A structure together with its ⋆ flavor."""
    kind: StructureKind
    flavor: StarFlavor = StarFlavor.TRANSPOSE

    @classmethod
    def parse(cls, text: str, flavor: Optional[str] = None) -> "StructureTag":
        """
        Raises:
            ParseError: If the structure or flavor is unknown.
        """
        raw = text.strip()
        flav = flavor
        body = raw
        if ":" in raw:
            body, flav = raw.split(":", 1)
        elif len(raw) > 2 and raw[1] in "-⋆" and raw[0].upper() in "TH":
            flav, body = raw[0], raw[2:]
        key = body.strip().lower()
        if key not in _ALIASES:
            raise ParseError(f"Unknown structure: {text!r}")
        if flav is None and key.startswith(("hermitian", "skew-hermitian")):
            flav = "H"
        try:
            star = StarFlavor.parse(flav or "T")
        except ValueError as e:
            raise ParseError(str(e)) from e
        return cls(_ALIASES[key], star)

    @classmethod
    def from_mobius(cls, A: MobiusMatrix, sign: int, flavor: StarFlavor) -> Optional["StructureTag"]:
        name = canonical_mobius_name(A)
        if name is None:
            return None
        return cls(_BY_MATRIX[(name, 1 if sign > 0 else -1)], StarFlavor.parse(flavor))

    @property
    def sign(self) -> int:
        return -1 if self.kind in _NEGATIVE else 1

    @property
    def mobius_name(self) -> str:
        return _MOBIUS_NAME[self.kind]

    def mobius_matrix(self, backend: Backend = Backend.RATIONAL) -> MobiusMatrix:
        return MobiusMatrix.named(self.mobius_name, backend)

    def condition(self, ell: int) -> ConditionKind:
        return condition_for(self.mobius_matrix(), ell)

    def coefficient_relation(self, j: int, grade: int) -> Tuple[int, int]:
        """
        (sign, j') with P_j^⋆ = sign·P_j' for a structured P of the given grade.
        """
        if self.mobius_name == "A1":
            return self.sign, j
        if self.mobius_name == "A2":
            return self.sign * (-1) ** j, j
        return self.sign, grade - j

    @property
    def label(self) -> str:
        return f"{self.flavor.value}-{self.kind.value}"

    def __str__(self) -> str:
        return self.label
