"""
Exception hierarchy for the construction stages
"""
from typing import Any, Optional


class ConstructionError(ValueError):
    """Base class for every invalid-input condition raised by the toolkit"""


class FieldError(ConstructionError):
    """Finite field cannot be built or operands do not belong together"""


class ParameterError(ConstructionError):
    """Parameters outside the admitted range (q, m, g, bounds, transforms)"""


class ParameterMismatchError(ConstructionError):
    """Scanned code parameters disagree with the claimed ones"""

    def __init__(self, message: str, claimed: Any = None, scanned: Any = None):
        super().__init__(f"{message} (claimed={claimed}, scanned={scanned})")
        self.claimed = claimed
        self.scanned = scanned


class DataFormatError(ConstructionError):
    """Malformed or inconsistent exported document"""


class ArrayError(ConstructionError):
    """Array-level precondition violated"""

    def __init__(self, message: str, witness: Optional[Any] = None):
        super().__init__(message if witness is None else f"{message}: {witness}")
        self.witness = witness
