"""
Steps of the boundary index pipeline on a register chain.

The compensator U^g is the product of link phases omega(l_x l_x+1^-1, l_x+1, g)
followed by the global right shift by g. Every later object (upsilon, its
split parts, the counterterm N, the associator iota) is a monomial operator
built from these by composition.
"""
import logging
from dataclasses import dataclass, field
from typing import Dict, Optional, Tuple

import numpy as np

from src.algebra import Cochain3, GroupElement, Phase
from src.engine import (
    Classification,
    MonomialOp,
    RegisterChain,
    classify,
    compose,
    compose_all,
    conjugate,
    diagonal_from_tables,
    factor_diagonal,
    inverse,
    link_diagonal,
    same_operator,
    shift,
)
from src.models import ErrorKind, InputError, MathematicalFailure, OperatorKind

logger = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class CompensatorFamily:
    """g -> U^g on one chain"""
    chain: RegisterChain
    cocycle: Cochain3
    ops: Dict[GroupElement, MonomialOp] = field(default_factory=dict)

    def __getitem__(self, g: GroupElement) -> MonomialOp:
        return self.ops[g]

    def mapped(self, fn) -> "CompensatorFamily":
        return CompensatorFamily(self.chain, self.cocycle, {g: fn(g, op) for g, op in self.ops.items()})


@dataclass(frozen=True, eq=False)
class PairPieces:
    """Everything the pipeline derives from one pair (g, h)"""
    pair: Tuple[GroupElement, GroupElement]
    upsilon: MonomialOp
    minus: MonomialOp
    plus: MonomialOp
    counterterm: MonomialOp
    tilded: MonomialOp

    def transported(self, fn) -> "PairPieces":
        return PairPieces(
            self.pair,
            fn(self.upsilon),
            fn(self.minus),
            fn(self.plus),
            fn(self.counterterm),
            fn(self.tilded),
        )


def link_phase_table(omega: Cochain3, g: GroupElement) -> np.ndarray:
    """T[a, b] = exponent of omega(a b^-1, b, g)"""
    group = omega.group
    n = group.order
    idx = np.arange(n)
    ratio = group.mult[idx[:, None], group.inv[None, :]]
    return omega.exponents[ratio, np.broadcast_to(idx[None, :], (n, n)), g]


def build_compensators(omega: Cochain3, chain: RegisterChain) -> CompensatorFamily:
    """
    Compensators U^g = E''(g) E'(g) for every g.

    Args:
        omega: normalized 3-cocycle on the chain's group
        chain: register chain (all blocks share omega)

    Returns:
        CompensatorFamily with U^e the identity
    """
    group = chain.group
    if omega.group != group:
        raise InputError(ErrorKind.GROUP_MISMATCH, "Cocycle and chain use different groups")
    if not omega.is_normalized():
        raise InputError(ErrorKind.NOT_NORMALIZED, f"Compensators need a normalized cocycle, got {omega.name}")
    links = [x for x in range(chain.register_count) if chain.is_link(x)]
    ops = {}
    for g in group.elements():
        table = link_phase_table(omega, g)
        factors = []
        if np.any(table):
            factors.extend(link_diagonal(x, table, omega.denominator) for x in links)
        if g != 0:
            factors.extend(shift(x, g) for x in range(chain.register_count))
        ops[g] = MonomialOp(chain, tuple(factors), name=f"U^{g}")
    return CompensatorFamily(chain, omega, ops)


def build_upsilon(family: CompensatorFamily, g: GroupElement, h: GroupElement) -> MonomialOp:
    """upsilon^(g,h) = U^g U^h (U^gh)^-1, which must act diagonally"""
    gh = family.chain.group.mul(g, h)
    upsilon = compose_all(
        family.chain,
        [family[g], family[h], inverse(family[gh])],
        name=f"upsilon^({g},{h})",
    )
    kind = classify(upsilon).kind
    if kind == OperatorKind.GENERAL:
        raise MathematicalFailure(
            ErrorKind.INTERNAL_INCONSISTENCY,
            f"upsilon^({g},{h}) moves labels; compensators are inconsistent with the chain",
            {"pair": [g, h]},
        )
    return upsilon


def split_upsilon(upsilon: MonomialOp) -> Tuple[MonomialOp, MonomialOp]:
    """
    Split a diagonal upsilon at the chain's cut.

    Args:
        upsilon: diagonal operator

    Returns:
        (minus, plus) with plus the factors at registers >= cut and minus the rest
        together with the scalar
    """
    chain = upsilon.chain
    fac = factor_diagonal(upsilon)
    plus_regs = chain.plus_registers()
    plus = diagonal_from_tables(
        chain,
        {x: fac.tables[x] for x in plus_regs},
        fac.denominator,
        name=f"{upsilon.name}+",
    )
    minus = diagonal_from_tables(
        chain,
        {x: fac.tables[x] for x in range(chain.register_count) if x not in plus_regs},
        fac.denominator,
        fac.scalar_exponent,
        name=f"{upsilon.name}-",
    )
    if not same_operator(compose(minus, plus), upsilon):
        raise MathematicalFailure(
            ErrorKind.INTERNAL_INCONSISTENCY,
            f"Split parts of {upsilon.name} do not recompose",
        )
    return minus, plus


def solve_counterterm(plus: MonomialOp) -> MonomialOp:
    """
    Counterterm N: the inverse of plus's factor at each cut register.

    Raises:
        MathematicalFailure: SUPPORT_CONDITION when compose(N, plus) still acts
            within a quarter-length window around a cut
    """
    chain = plus.chain
    fac = factor_diagonal(plus)
    counterterm = diagonal_from_tables(
        chain,
        {c: -fac.tables[c] for c in chain.cut_registers()},
        fac.denominator,
        name=f"N[{plus.name}]",
    )
    check_support(tilde_upsilon(plus, counterterm))
    return counterterm


def tilde_upsilon(plus: MonomialOp, counterterm: MonomialOp) -> MonomialOp:
    return compose(counterterm, plus, name=f"~{plus.name}")


def check_support(tilded: MonomialOp) -> Tuple[int, ...]:
    """Support of a tilded part; must avoid the window of radius length//4 around every cut"""
    chain = tilded.chain
    support = classify(tilded).support
    window = chain.window(chain.length // 4)
    clash = sorted(set(support) & window)
    if clash:
        raise MathematicalFailure(
            ErrorKind.SUPPORT_CONDITION,
            f"{tilded.name} acts at registers {clash} inside the window around the cut",
            {"support": list(support), "window": sorted(window)},
        )
    return support


def build_iota(
    family: CompensatorFamily,
    tilded: Dict[Tuple[GroupElement, GroupElement], MonomialOp],
    g: GroupElement,
    h: GroupElement,
    k: GroupElement,
) -> MonomialOp:
    """iota = ~u(g,h) ~u(gh,k) ~u(g,hk)^-1 (U^g ~u(h,k) (U^g)^-1)^-1"""
    group = family.chain.group
    gh, hk = group.mul(g, h), group.mul(h, k)
    return compose_all(
        family.chain,
        [
            tilded[(g, h)],
            tilded[(gh, k)],
            inverse(tilded[(g, hk)]),
            inverse(conjugate(tilded[(h, k)], family[g])),
        ],
        name=f"iota^({g},{h},{k})",
    )


def extract_index(iota: MonomialOp, classification: Optional[Classification] = None) -> Phase:
    """The scalar iota acts as; anything else is a localization failure"""
    c = classification or classify(iota)
    if c.kind != OperatorKind.SCALAR:
        raise MathematicalFailure(
            ErrorKind.NOT_LOCALIZED,
            f"index extraction failed: {iota.name or 'iota'} not localized",
            {"kind": c.kind.value, "support": list(c.support)},
        )
    return c.scalar
