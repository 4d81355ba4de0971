########################
# Run Record Model     #
########################

"""
This module implements the record kept for every workbench run: which
command ran, on what kind of polynomial, and how it ended.

Key Features:
1. Value Object Pattern:
   - One RunRecord per build, verify, sparse, recover, refute or demo run
   - Equality ignores the timestamp

2. Data Management:
   - to_dict()/from_dict() use plain strings so records survive a CSV round
     trip through pandas
   - ISO format timestamps
   - Optional integers (ℓ, d, k, n, census) are stored as empty strings
     when unknown

3. Error Handling:
   - from_dict() raises OperationError on missing or malformed fields
"""

from dataclasses import dataclass, field
import datetime
import math
from typing import Any, Dict, Optional

from app.exceptions import OperationError

RECORD_COLUMNS = ("command", "structure", "ell", "d", "k", "n", "outcome", "census", "detail", "timestamp")

OUTCOMES = ("ok", "failed", "error")


def _optional_int(value: Any) -> Optional[int]:
    if value is None or value == "":
        return None
    if isinstance(value, float) and math.isnan(value):
        return None
    return int(value)


def _optional_text(value: Any) -> str:
    if value is None or (isinstance(value, float) and math.isnan(value)):
        return ""
    return str(value)


@dataclass
class RunRecord:
    """
    Value Object describing a single workbench run.

    Attributes:
        command: Subcommand name, e.g. "build".
        structure: Structure label such as "T-palindromic", or "".
        ell, d, k, n: Grade of L, arm size, grade of P, block size (when known).
        outcome: "ok", "failed" (a certificate did not hold) or "error".
        census: Nonzero blocks of the produced lification, if any.
        detail: One line summary for the history listing.
        timestamp: When the run finished.
    """

    command: str
    structure: str = ""
    ell: Optional[int] = None
    d: Optional[int] = None
    k: Optional[int] = None
    n: Optional[int] = None
    outcome: str = "ok"
    census: Optional[int] = None
    detail: str = ""
    timestamp: datetime.datetime = field(default_factory=datetime.datetime.now)

    def __post_init__(self):
        if self.outcome not in OUTCOMES:
            raise OperationError(f"Unknown run outcome: {self.outcome}")

    @property
    def succeeded(self) -> bool:
        return self.outcome == "ok"

    def to_dict(self) -> Dict[str, Any]:
        """
        Convert the record to a dictionary of strings for serialization.

        Returns:
            Dict[str, Any]: One entry per column of the history file.
        """
        def text(value: Optional[int]) -> str:
            return "" if value is None else str(value)

        return {
            'command': self.command,
            'structure': self.structure,
            'ell': text(self.ell),
            'd': text(self.d),
            'k': text(self.k),
            'n': text(self.n),
            'outcome': self.outcome,
            'census': text(self.census),
            'detail': self.detail,
            'timestamp': self.timestamp.isoformat(),
        }

    @staticmethod
    def from_dict(data: Dict[str, Any]) -> 'RunRecord':
        """
        Create a record from a dictionary, as read back from the history file.

        Args:
            data (Dict[str, Any]): Dictionary with the RECORD_COLUMNS keys.

        Returns:
            RunRecord: The rebuilt record.

        Raises:
            OperationError: If data is invalid or missing required fields.
        """
        try:
            return RunRecord(
                command=str(data['command']),
                structure=_optional_text(data.get('structure')),
                ell=_optional_int(data.get('ell')),
                d=_optional_int(data.get('d')),
                k=_optional_int(data.get('k')),
                n=_optional_int(data.get('n')),
                outcome=str(data['outcome']),
                census=_optional_int(data.get('census')),
                detail=_optional_text(data.get('detail')),
                timestamp=datetime.datetime.fromisoformat(str(data['timestamp'])),
            )
        except (KeyError, TypeError, ValueError) as e:
            raise OperationError(f"Invalid run record: {e}")

    def __str__(self) -> str:
        shape = ", ".join(
            f"{name}={value}" for name, value in (("ℓ", self.ell), ("d", self.d), ("k", self.k), ("n", self.n))
            if value is not None
        )
        parts = [self.command]
        if self.structure:
            parts.append(self.structure)
        if shape:
            parts.append(f"({shape})")
        text = " ".join(parts) + f": {self.outcome}"
        if self.census is not None:
            text += f", {self.census} blocks"
        if self.detail:
            text += f" - {self.detail}"
        return text

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, RunRecord):
            return NotImplemented
        return self.to_dict() | {'timestamp': None} == other.to_dict() | {'timestamp': None}
