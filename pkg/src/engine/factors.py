from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Dict, List, Optional, Tuple

import numpy as np

from src.algebra import FiniteGroup, GroupElement, require_int64_denominator
from src.models import ErrorKind, InputError


class FactorKind(str, Enum):
    """Elementary local operators a monomial is built from"""
    SHIFT = "register-shift"
    REGISTER_DIAGONAL = "register-diagonal"
    LINK_DIAGONAL = "link-diagonal"


@dataclass(frozen=True, eq=False)
class LocalFactor:
    """One local factor acting on a bra.

    SHIFT sends <..l_x..| to <..l_x g..|. REGISTER_DIAGONAL multiplies by
    exp(2 pi i table[l_x] / denominator), LINK_DIAGONAL by
    exp(2 pi i table[l_x, l_x+1] / denominator).
    """
    kind: FactorKind
    register: int
    element: GroupElement = 0
    table: Optional[np.ndarray] = None
    denominator: int = 1

    def __post_init__(self):
        if self.kind == FactorKind.SHIFT:
            return
        if self.denominator < 1:
            raise InputError(ErrorKind.UNSUPPORTED_DENOMINATOR, f"Bad factor denominator {self.denominator}")
        require_int64_denominator(self.denominator, f"{self.kind.value} factor at register {self.register}")
        arr = np.array(self.table, dtype=np.int64) % self.denominator
        expected_rank = 1 if self.kind == FactorKind.REGISTER_DIAGONAL else 2
        if arr.ndim != expected_rank:
            raise InputError(ErrorKind.MALFORMED_TABLE, f"{self.kind.value} table must have rank {expected_rank}")
        arr.setflags(write=False)
        object.__setattr__(self, "table", arr)

    @property
    def registers(self) -> Tuple[int, ...]:
        if self.kind == FactorKind.LINK_DIAGONAL:
            return (self.register, self.register + 1)
        return (self.register,)

    def inverse(self, group: FiniteGroup) -> "LocalFactor":
        if self.kind == FactorKind.SHIFT:
            return LocalFactor(FactorKind.SHIFT, self.register, group.inverse(self.element))
        return LocalFactor(self.kind, self.register, table=-self.table, denominator=self.denominator)

    def apply(self, labels: List[int], group: FiniteGroup) -> int:
        """Act in place on a label list; returns the phase exponent over self.denominator"""
        x = self.register
        if self.kind == FactorKind.SHIFT:
            labels[x] = group.mul(labels[x], self.element)
            return 0
        if self.kind == FactorKind.REGISTER_DIAGONAL:
            return int(self.table[labels[x]])
        return int(self.table[labels[x], labels[x + 1]])

    def act(self, labels: np.ndarray, group: FiniteGroup) -> np.ndarray:
        """Vectorized apply over rows of a label array; returns exponents over self.denominator"""
        x = self.register
        if self.kind == FactorKind.SHIFT:
            labels[:, x] = group.mult[labels[:, x], self.element]
            return np.zeros(labels.shape[0], dtype=np.int64)
        if self.kind == FactorKind.REGISTER_DIAGONAL:
            return self.table[labels[:, x]]
        return self.table[labels[:, x], labels[:, x + 1]]

    def to_dict(self) -> Dict[str, Any]:
        out: Dict[str, Any] = {"kind": self.kind.value, "register": self.register}
        if self.kind == FactorKind.SHIFT:
            out["element"] = int(self.element)
        else:
            out["denominator"] = self.denominator
            out["table"] = self.table.tolist()
        return out

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "LocalFactor":
        kind = FactorKind(data["kind"])
        if kind == FactorKind.SHIFT:
            return cls(kind, int(data["register"]), int(data["element"]))
        return cls(kind, int(data["register"]), table=np.array(data["table"]), denominator=int(data["denominator"]))


def shift(register: int, element: GroupElement) -> LocalFactor:
    return LocalFactor(FactorKind.SHIFT, register, element)


def register_diagonal(register: int, table, denominator: int) -> LocalFactor:
    return LocalFactor(FactorKind.REGISTER_DIAGONAL, register, table=np.asarray(table), denominator=denominator)


def link_diagonal(register: int, table, denominator: int) -> LocalFactor:
    return LocalFactor(FactorKind.LINK_DIAGONAL, register, table=np.asarray(table), denominator=denominator)
