########################
# Input Validation     #
########################

"""
This module validates and converts the raw values handed to the workbench
commands, so bad input fails fast with a ValidationError (exit code 2).

Key Features:
1. Validation Logic:
   - grades and block sizes must be positive integers
   - structures accept the short and long names plus a ⋆ flavor
   - refuter grids are nonzero rationals, partitions are "part/parts"
   - Möbius matrices are named (A1, A2, A3, cayley±1) or four scalars

2. Error Handling:
   - every failure raises ValidationError (or a subclass) with the
     offending value in the message
"""

from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path
from typing import Any, List, Optional, Tuple

from app.exceptions import ConfigurationError, EmptyGrid, LificationError, ValidationError
from app.lification_config import parse_grid
from app.mobius import MobiusMatrix
from app.scalar import Backend
from app.structures import StructureTag


@dataclass
class InputValidator:
    """Validates and converts command inputs."""

    @staticmethod
    def validate_positive_int(value: Any, name: str = "value") -> int:
        """
        Raises:
            ValidationError: If value is not an integer ≥ 1.
        """
        try:
            if isinstance(value, str):
                value = value.strip()
            number = int(value)
        except (TypeError, ValueError) as e:
            raise ValidationError(f"{name} must be an integer, got {value!r}") from e
        if isinstance(value, float) and value != number:
            raise ValidationError(f"{name} must be an integer, got {value!r}")
        if number < 1:
            raise ValidationError(f"{name} must be positive, got {number}")
        return number

    @staticmethod
    def validate_structure(text: str, star: Optional[str] = None) -> StructureTag:
        """
        Raises:
            ValidationError: For unknown structures or flavors.
        """
        try:
            return StructureTag.parse(text, star)
        except (LificationError, ValueError) as e:
            raise ValidationError(f"Invalid structure {text!r}: {e}") from e

    @staticmethod
    def validate_grid(text: str) -> List[Fraction]:
        """
        Raises:
            EmptyGrid: If no nonzero value remains.
            ValidationError: On unparsable entries.
        """
        try:
            values = parse_grid(text)
        except ConfigurationError as e:
            raise ValidationError(str(e)) from e
        values = [v for v in values if v != 0]
        if not values:
            raise EmptyGrid(f"Grid {text!r} has no nonzero value")
        return values

    @staticmethod
    def validate_partition(text: str) -> Tuple[int, int]:
        """
        Parse "part/parts" with 0 ≤ part < parts.

        Raises:
            ValidationError: On malformed text or an out-of-range part.
        """
        try:
            part_text, parts_text = text.split("/")
            part, parts = int(part_text), int(parts_text)
        except ValueError as e:
            raise ValidationError(f"Partition must look like 'part/parts', got {text!r}") from e
        if parts < 1 or not 0 <= part < parts:
            raise ValidationError(f"Partition {text!r} needs 0 <= part < parts")
        return part, parts

    @staticmethod
    def validate_mobius(text: str, backend: Backend = Backend.GAUSSIAN) -> MobiusMatrix:
        """
        Raises:
            ValidationError: If the text is neither a named matrix nor four scalars.
        """
        try:
            A = MobiusMatrix.parse(text, backend)
        except LificationError as e:
            raise ValidationError(f"Invalid Möbius matrix {text!r}: {e}") from e
        if A.det().is_zero():
            raise ValidationError(f"Möbius matrix {text!r} is singular")
        return A

    @staticmethod
    def validate_sign(value: Any) -> int:
        if str(value).strip() in ("1", "+1", "+"):
            return 1
        if str(value).strip() in ("-1", "-"):
            return -1
        raise ValidationError(f"Sign must be +1 or -1, got {value!r}")

    @staticmethod
    def validate_backend(text: str) -> Backend:
        try:
            return Backend(str(text).strip().lower())
        except ValueError as e:
            raise ValidationError(f"Unknown field {text!r}") from e

    @staticmethod
    def validate_input_file(path: Any) -> Path:
        """
        Raises:
            ValidationError: If the path does not name an existing file.
        """
        path = Path(path)
        if not path.is_file():
            raise ValidationError(f"{path}: no such file")
        return path
