from enum import Enum
from typing import Any, Dict, Optional


class ErrorKind(str, Enum):
    """Failure categories raised by the library"""
    INVALID_ORDER = "invalid-order"
    MALFORMED_TABLE = "malformed-table"
    LEVEL_OUT_OF_RANGE = "level-out-of-range"
    UNSUPPORTED_DENOMINATOR = "unsupported-denominator"
    NOT_CYCLIC_CONSISTENT = "not-cyclic-consistent"
    INTERNAL_INCONSISTENCY = "internal-inconsistency"
    CHAIN_MISMATCH = "chain-mismatch"
    GROUP_MISMATCH = "group-mismatch"
    BUDGET_EXCEEDED = "budget-exceeded"
    NOT_DIAGONAL = "not-diagonal"
    NOT_FACTORIZABLE = "not-factorizable"
    NOT_NORMALIZED = "not-normalized"
    SUPPORT_CONDITION = "support-condition"
    NOT_LOCALIZED = "not-localized"
    COMPENSATION_FAILURE = "compensation-failure"
    CROSSCHECK_FAILURE = "crosscheck-failure"
    INVALID_INPUT = "invalid-input"


class SptIndexError(Exception):
    """Base error carrying a kind and structured details"""

    def __init__(self, kind: ErrorKind, message: str, details: Optional[Dict[str, Any]] = None):
        super().__init__(message)
        self.kind = kind
        self.message = message
        self.details = details or {}

    def to_dict(self) -> Dict[str, Any]:
        return {"kind": self.kind.value, "message": self.message, "details": self.details}


class InputError(SptIndexError):
    """Bad user input: malformed tables, out-of-range parameters, unreadable files"""


class MathematicalFailure(SptIndexError):
    """A claimed algebraic property did not hold"""
