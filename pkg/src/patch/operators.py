"""
Monomial operators on patch leg configurations.

Factors act on bras in order. LegShift and LegPhase are rigid; LinkShift
shifts a pair of legs only when their labels agree (identity off the link
diagonal), so configurations still map one-to-one.
"""
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import List, Sequence, Tuple, Union

import numpy as np

from src.algebra import FiniteGroup, Phase, require_int64_denominator
from src.models import ErrorKind, InputError
from .geometry import PatchGeometry


@dataclass(frozen=True, eq=False)
class LegShift:
    """<..l..| -> <..l g..| on every listed leg"""
    legs: Tuple[int, ...]
    element: int

    def inverse(self, group: FiniteGroup) -> "LegShift":
        return LegShift(self.legs, group.inverse(self.element))


@dataclass(frozen=True, eq=False)
class LegPhase:
    """Phase exp(2 pi i table[l_legs] / denominator)"""
    legs: Tuple[int, ...]
    table: np.ndarray
    denominator: int

    def __post_init__(self):
        require_int64_denominator(self.denominator, f"leg phase on {list(self.legs)}")
        arr = np.array(self.table, dtype=np.int64) % self.denominator
        if arr.ndim != len(self.legs):
            raise InputError(ErrorKind.MALFORMED_TABLE, "Leg phase table rank must match its legs")
        arr.setflags(write=False)
        object.__setattr__(self, "table", arr)

    def inverse(self, group: FiniteGroup) -> "LegPhase":
        return LegPhase(self.legs, -self.table, self.denominator)


@dataclass(frozen=True, eq=False)
class LinkShift:
    """Shift both legs by g when their labels are equal, identity otherwise"""
    first: int
    second: int
    element: int

    @property
    def legs(self) -> Tuple[int, int]:
        return self.first, self.second

    def inverse(self, group: FiniteGroup) -> "LinkShift":
        return LinkShift(self.first, self.second, group.inverse(self.element))


PatchFactor = Union[LegShift, LegPhase, LinkShift]


@dataclass(frozen=True, eq=False)
class PatchOp:
    """Ordered product of patch factors"""
    geometry: PatchGeometry
    group: FiniteGroup
    factors: Tuple[PatchFactor, ...] = ()
    name: str = ""

    def __post_init__(self):
        object.__setattr__(self, "factors", tuple(self.factors))

    @property
    def denominator(self) -> int:
        dens = [f.denominator for f in self.factors if isinstance(f, LegPhase)]
        return math.lcm(*dens) if dens else 1

    def touched_legs(self) -> List[int]:
        legs = set()
        for f in self.factors:
            legs.update(f.legs)
        return sorted(legs)


def _check(a: PatchOp, b: PatchOp) -> None:
    if a.geometry != b.geometry or a.group != b.group:
        raise InputError(ErrorKind.CHAIN_MISMATCH, "Patch operators act on different patches")


def compose(a: PatchOp, b: PatchOp, name: str = "") -> PatchOp:
    """A then B on a bra"""
    _check(a, b)
    return PatchOp(a.geometry, a.group, a.factors + b.factors, name)


def compose_all(ops: Sequence[PatchOp], name: str = "") -> PatchOp:
    result = ops[0]
    for op in ops[1:]:
        result = compose(result, op)
    return PatchOp(result.geometry, result.group, result.factors, name)


def inverse(op: PatchOp) -> PatchOp:
    factors = tuple(f.inverse(op.group) for f in reversed(op.factors))
    return PatchOp(op.geometry, op.group, factors, f"({op.name})^-1" if op.name else "")


def conjugate(a: PatchOp, b: PatchOp, name: str = "") -> PatchOp:
    """B A B^-1"""
    return compose(b, compose(a, inverse(b)), name)


def apply_config(op: PatchOp, config: Sequence[int]) -> Tuple[Tuple[int, ...], Phase]:
    """Thread one leg configuration through the operator"""
    group = op.group
    labels = list(config)
    if len(labels) != op.geometry.leg_count:
        raise InputError(ErrorKind.CHAIN_MISMATCH, f"Expected {op.geometry.leg_count} leg labels")
    exponent = Fraction(0)
    for f in op.factors:
        if isinstance(f, LegShift):
            for leg in f.legs:
                labels[leg] = group.mul(labels[leg], f.element)
        elif isinstance(f, LinkShift):
            if labels[f.first] == labels[f.second]:
                labels[f.first] = group.mul(labels[f.first], f.element)
                labels[f.second] = group.mul(labels[f.second], f.element)
        else:
            k = int(f.table[tuple(labels[leg] for leg in f.legs)])
            if k:
                exponent += Fraction(k, f.denominator)
    return tuple(labels), Phase(exponent)


def apply_batch(op: PatchOp, labels: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    """Vectorized apply_config over rows; returns (outputs, exponents over op.denominator)"""
    mult = op.group.mult
    D = op.denominator
    out = labels.copy()
    exps = np.zeros(labels.shape[0], dtype=np.int64)
    for f in op.factors:
        if isinstance(f, LegShift):
            for leg in f.legs:
                out[:, leg] = mult[out[:, leg], f.element]
        elif isinstance(f, LinkShift):
            eq = out[:, f.first] == out[:, f.second]
            out[:, f.first] = np.where(eq, mult[out[:, f.first], f.element], out[:, f.first])
            out[:, f.second] = np.where(eq, mult[out[:, f.second], f.element], out[:, f.second])
        else:
            exps = (exps + f.table[tuple(out[:, leg] for leg in f.legs)] * (D // f.denominator)) % D
    return out, exps
