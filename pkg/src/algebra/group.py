import logging
from dataclasses import dataclass, field
from typing import List, Optional, Sequence

import numpy as np

from src.models import ErrorKind, InputError, LawViolation
from src.settings import get_settings

logger = logging.getLogger(__name__)

GroupElement = int
"""An element is its index in [0, order); the identity is always 0."""


def _frozen(table: np.ndarray) -> np.ndarray:
    table = np.array(table, dtype=np.int64)
    table.setflags(write=False)
    return table


@dataclass(frozen=True, eq=False)
class FiniteGroup:
    """Finite group given by its multiplication table, identity at index 0"""
    order: int
    mult: np.ndarray
    inv: np.ndarray
    name: str = field(default="")

    @classmethod
    def from_table(cls, table: Sequence[Sequence[int]], name: str = "") -> "FiniteGroup":
        """
        Build a group from a multiplication table without checking the laws.

        The inverse table is derived from the rows: inv[a] is the first b with
        a*b = 0, or -1 if the row never reaches the identity. Use validate()
        to obtain a report on the group laws.

        Args:
            table: order x order table of element indices
            name: identifier used in reports

        Returns:
            FiniteGroup

        Raises:
            InputError: the table is not square, is empty, or exceeds the order cap
        """
        try:
            arr = np.array(table, dtype=np.int64)
        except (TypeError, ValueError) as e:
            raise InputError(ErrorKind.MALFORMED_TABLE, f"Table is not an integer matrix: {e}")
        if arr.ndim != 2 or arr.shape[0] != arr.shape[1] or arr.shape[0] == 0:
            raise InputError(
                ErrorKind.MALFORMED_TABLE,
                f"Multiplication table must be square and non-empty, got shape {arr.shape}",
            )
        n = arr.shape[0]
        _check_order_cap(n)
        inv = np.full(n, -1, dtype=np.int64)
        for a in range(n):
            hits = np.flatnonzero(arr[a] == 0)
            if hits.size:
                inv[a] = hits[0]
        return cls(order=n, mult=_frozen(arr), inv=_frozen(inv), name=name or f"table{n}")

    def mul(self, a: GroupElement, b: GroupElement) -> GroupElement:
        return int(self.mult[a, b])

    def inverse(self, a: GroupElement) -> GroupElement:
        return int(self.inv[a])

    def power(self, a: GroupElement, k: int) -> GroupElement:
        """a**k for k >= 0"""
        result = 0
        for _ in range(k):
            result = int(self.mult[result, a])
        return result

    def element_order(self, a: GroupElement) -> int:
        x, k = a, 1
        while x != 0:
            x = int(self.mult[x, a])
            k += 1
            if k > self.order:
                raise InputError(ErrorKind.MALFORMED_TABLE, f"Element {a} has no finite order")
        return k

    def elements(self) -> range:
        return range(self.order)

    def check_element(self, a: int) -> GroupElement:
        if not 0 <= a < self.order:
            raise InputError(ErrorKind.INVALID_INPUT, f"Element {a} not in group of order {self.order}")
        return a

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, FiniteGroup):
            return NotImplemented
        return self.order == other.order and np.array_equal(self.mult, other.mult)

    def __hash__(self) -> int:
        return hash((self.order, self.mult.tobytes()))

    def __repr__(self) -> str:
        return f"FiniteGroup({self.name}, order={self.order})"


def _check_order_cap(n: int) -> None:
    cap = get_settings().max_group_order
    if n > cap:
        raise InputError(
            ErrorKind.INVALID_ORDER,
            f"Group order {n} exceeds the configured cap {cap} (SPT_MAX_GROUP_ORDER)",
        )


def make_cyclic(n: int) -> FiniteGroup:
    """
    Cyclic group Z_n with mult[a][b] = (a + b) mod n.

    Args:
        n: group order, n >= 1

    Returns:
        FiniteGroup named "z{n}"
    """
    if n < 1:
        raise InputError(ErrorKind.INVALID_ORDER, f"Cyclic group order must be positive, got {n}")
    _check_order_cap(n)
    idx = np.arange(n)
    mult = (idx[:, None] + idx[None, :]) % n
    inv = (-idx) % n
    return FiniteGroup(order=n, mult=_frozen(mult), inv=_frozen(inv), name=f"z{n}")


def direct_product(g1: FiniteGroup, g2: FiniteGroup) -> FiniteGroup:
    """
    Direct product with the pair (a, b) encoded as a * |G2| + b.

    Args:
        g1: first factor
        g2: second factor

    Returns:
        FiniteGroup of order |G1| * |G2|
    """
    n1, n2 = g1.order, g2.order
    _check_order_cap(n1 * n2)
    a = np.arange(n1 * n2) // n2
    b = np.arange(n1 * n2) % n2
    mult = g1.mult[a[:, None], a[None, :]] * n2 + g2.mult[b[:, None], b[None, :]]
    inv = g1.inv[a] * n2 + g2.inv[b]
    return FiniteGroup(order=n1 * n2, mult=_frozen(mult), inv=_frozen(inv), name=f"{g1.name}*{g2.name}")


def validate(group: FiniteGroup) -> List[LawViolation]:
    """
    Check range, identity, inverse and associativity laws exhaustively.

    Args:
        group: group to check

    Returns:
        List of violations, empty iff the table defines a group with identity 0
    """
    n = group.order
    mult = group.mult
    if mult.shape != (n, n) or group.inv.shape != (n,):
        raise InputError(ErrorKind.MALFORMED_TABLE, f"Tables do not match declared order {n}")

    violations: List[LawViolation] = []
    bad = np.argwhere((mult < 0) | (mult >= n))
    if bad.size:
        a, b = bad[0]
        violations.append(LawViolation(law="range", witness=[int(a), int(b)]))
        return violations

    for a in range(n):
        if mult[0, a] != a or mult[a, 0] != a:
            violations.append(LawViolation(law="identity", witness=[a]))
        i = int(group.inv[a])
        if i < 0 or mult[a, i] != 0 or mult[i, a] != 0:
            violations.append(LawViolation(law="inverse", witness=[a]))

    idx = np.arange(n)
    left = mult[mult[:, :, None], idx[None, None, :]]
    right = mult[idx[:, None, None], mult[None, :, :]]
    bad = np.argwhere(left != right)
    if bad.size:
        violations.append(LawViolation(law="associativity", witness=[int(x) for x in bad[0]]))

    if violations:
        logger.debug(f"Group {group.name} has {len(violations)} law violation(s)")
    return violations


def find_generator(group: FiniteGroup) -> Optional[GroupElement]:
    """Smallest element generating the whole group, or None if it is not cyclic"""
    for a in group.elements():
        if group.element_order(a) == group.order:
            return a
    return None
