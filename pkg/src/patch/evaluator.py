"""
Exact expectation values <psi| O |psi> in the plaquette product state.

Rigid phase factors on legs that no conditional shift touches are rewritten
as functions of plaquette labels and merged, so the on-site edge weights that
cancel between neighbouring sites drop out symbolically. What remains (legs
touched by link shifts and uncancelled weights) is grouped into connected
components of plaquettes, and each component is enumerated over its labels.
The expectation value is the product over components.
"""
import logging
from dataclasses import dataclass
from typing import Dict, List, Optional, Set, Tuple

import numpy as np

from src.algebra import Phase
from src.models import ErrorKind, InputError, MathematicalFailure
from src.settings import get_settings
from .operators import LegPhase, LegShift, LinkShift, PatchOp

logger = logging.getLogger(__name__)

Node = Tuple[str, int]


@dataclass(frozen=True, eq=False)
class ComponentScan:
    """Enumeration of one connected group of plaquettes"""
    plaquettes: Tuple[int, ...]
    configs: np.ndarray
    exponents: np.ndarray
    on_support: np.ndarray
    fixed: np.ndarray
    denominator: int
    order: int

    @property
    def exact(self) -> bool:
        return bool(self.on_support.all()) and bool(np.all(self.exponents == self.exponents[0]))

    def value(self) -> complex:
        weights = np.exp(2j * np.pi * self.exponents / self.denominator)
        return complex(np.mean(np.where(self.on_support, weights, 0)))


@dataclass(frozen=True, eq=False)
class PatchOverlap:
    """<psi| O |psi> with its exact phase when the magnitude is exactly one"""
    phase: Optional[Phase]
    value: complex
    magnitude: float
    damaged: Tuple[int, ...]
    components: Tuple[ComponentScan, ...]
    constant_exponent: int
    denominator: int
    fixes_support: bool

    @property
    def exact(self) -> bool:
        return self.phase is not None


class _UnionFind:
    def __init__(self):
        self.parent: Dict[Node, Node] = {}

    def find(self, a: Node) -> Node:
        self.parent.setdefault(a, a)
        while self.parent[a] != a:
            self.parent[a] = self.parent[self.parent[a]]
            a = self.parent[a]
        return a

    def union(self, nodes: List[Node]) -> None:
        if not nodes:
            return
        root = self.find(nodes[0])
        for other in nodes[1:]:
            r = self.find(other)
            if r != root:
                self.parent[r] = root


def _grid(n: int, k: int) -> np.ndarray:
    """All label tuples for k plaquettes, rows in lexicographic order"""
    if k == 0:
        return np.zeros((1, 0), dtype=np.int64)
    return np.indices((n,) * k).reshape(k, -1).T.astype(np.int64)


@dataclass(frozen=True, eq=False)
class SymbolicForm:
    """Rigid part of an operator reduced to plaquette terms.

    ``shifts`` is the net right shift of every leg not touched by a link
    shift; ``terms`` maps sorted plaquette tuples to exponent tables that are
    not constant; ``explicit`` keeps the factors that must be threaded
    label by label, each with the rigid-leg shifts in force when it acts.
    """
    dirty: Set[int]
    shifts: np.ndarray
    terms: Dict[Tuple[int, ...], np.ndarray]
    constant: int
    explicit: List[Tuple[object, Dict[int, int]]]
    denominator: int

    def terms_involving(self, plaquette: int) -> Dict[Tuple[int, ...], np.ndarray]:
        return {k: t for k, t in self.terms.items() if plaquette in k}


def reduce_symbolic(op: PatchOp) -> SymbolicForm:
    """Thread the rigid factors symbolically and merge their phases by plaquette"""
    geom, group = op.geometry, op.group
    n, mult, D = group.order, group.mult, op.denominator
    leg_plaq = geom.leg_plaquettes()

    dirty: Set[int] = set()
    for f in op.factors:
        if isinstance(f, LinkShift):
            dirty.update(f.legs)

    shifts = np.zeros(geom.leg_count, dtype=np.int64)
    terms: Dict[Tuple[int, ...], np.ndarray] = {}
    constant = 0
    explicit: List[Tuple[object, Dict[int, int]]] = []

    for f in op.factors:
        if isinstance(f, LegShift):
            moved = [leg for leg in f.legs if leg in dirty]
            for leg in f.legs:
                if leg not in dirty:
                    shifts[leg] = mult[shifts[leg], f.element]
            if moved:
                explicit.append((LegShift(tuple(moved), f.element), {}))
        elif isinstance(f, LinkShift):
            explicit.append((f, {}))
        elif any(leg in dirty for leg in f.legs):
            explicit.append((f, {leg: int(shifts[leg]) for leg in f.legs if leg not in dirty}))
        else:
            scale = D // f.denominator
            variables = sorted({int(leg_plaq[leg]) for leg in f.legs if leg_plaq[leg] >= 0})
            grid = _grid(n, len(variables))
            args = []
            for leg in f.legs:
                p = int(leg_plaq[leg])
                base = grid[:, variables.index(p)] if p >= 0 else np.zeros(grid.shape[0], dtype=np.int64)
                args.append(mult[base, shifts[leg]])
            values = f.table[tuple(args)] * scale
            if not variables:
                constant += int(values[0])
                continue
            key = tuple(variables)
            terms[key] = (terms.get(key, 0) + values.reshape((n,) * len(variables))) % D

    for key in [k for k, t in terms.items() if np.all(t == t.flat[0])]:
        constant += int(terms.pop(key).flat[0])
    return SymbolicForm(dirty, shifts, terms, constant % D, explicit, D)


def evaluate(op: PatchOp) -> PatchOverlap:
    """
    Expectation value of a patch operator in the plaquette product state.

    Args:
        op: monomial patch operator

    Returns:
        PatchOverlap; phase is set iff |<psi|O|psi>| = 1 exactly
    """
    geom, group = op.geometry, op.group
    n, mult, D = group.order, group.mult, op.denominator
    leg_plaq = geom.leg_plaquettes()
    form = reduce_symbolic(op)
    dirty, shifts, terms, constant, explicit = form.dirty, form.shifts, form.terms, form.constant, form.explicit

    plaq_legs: Dict[int, List[int]] = {}
    for leg, p in enumerate(leg_plaq):
        plaq_legs.setdefault(int(p), []).append(leg)

    damaged = []
    for p, legs in plaq_legs.items():
        rigid = [leg for leg in legs if leg not in dirty]
        if p < 0:
            if any(shifts[leg] != 0 for leg in rigid):
                damaged.append(p)
        elif len(rigid) == len(legs) and len({int(shifts[leg]) for leg in legs}) > 1:
            damaged.append(p)
    if damaged:
        logger.debug(f"{op.name or '<patch op>'}: plaquettes {sorted(set(damaged))} leave the support")
        return PatchOverlap(None, 0j, 0.0, tuple(sorted(set(damaged))), (), constant, D, False)

    def node(leg: int) -> Optional[Node]:
        p = int(leg_plaq[leg])
        if p >= 0:
            return ("p", p)
        return ("d", leg) if leg in dirty else None

    uf = _UnionFind()
    for f, _ in explicit:
        uf.union([nd for nd in (node(leg) for leg in f.legs) if nd is not None])
    for key in terms:
        uf.union([("p", p) for p in key])

    members: Dict[Node, List[Node]] = {}
    for nd in list(uf.parent):
        members.setdefault(uf.find(nd), []).append(nd)

    budget = get_settings().patch_term_budget
    components = []
    for root, nodes in members.items():
        plaqs = sorted(p for kind, p in nodes if kind == "p")
        dangling = sorted(leg for kind, leg in nodes if kind == "d")
        size = n ** len(plaqs)
        if size > budget:
            raise InputError(
                ErrorKind.BUDGET_EXCEEDED,
                f"Component of {len(plaqs)} plaquettes needs {size} terms, above SPT_PATCH_TERM_BUDGET={budget}",
            )
        configs = _grid(n, len(plaqs))
        col = {p: i for i, p in enumerate(plaqs)}
        rows = configs.shape[0]
        zeros = np.zeros(rows, dtype=np.int64)

        def base(leg: int) -> np.ndarray:
            p = int(leg_plaq[leg])
            return configs[:, col[p]] if p >= 0 else zeros

        labels = {leg: base(leg).copy() for leg in dirty if node(leg) is not None and uf.find(node(leg)) == root}
        exps = np.zeros(rows, dtype=np.int64)
        for f, snap in explicit:
            first = next(nd for nd in (node(leg) for leg in f.legs) if nd is not None)
            if uf.find(first) != root:
                continue
            if isinstance(f, LegShift):
                for leg in f.legs:
                    labels[leg] = mult[labels[leg], f.element]
            elif isinstance(f, LinkShift):
                eq = labels[f.first] == labels[f.second]
                for leg in f.legs:
                    labels[leg] = np.where(eq, mult[labels[leg], f.element], labels[leg])
            else:
                args = [labels[leg] if leg in dirty else mult[base(leg), snap[leg]] for leg in f.legs]
                exps += f.table[tuple(args)] * (D // f.denominator)
        for key, table in terms.items():
            if uf.find(("p", key[0])) == root:
                exps += table[tuple(configs[:, col[p]] for p in key)]
        exps %= D

        on_support = np.ones(rows, dtype=bool)
        fixed = np.ones(rows, dtype=bool)
        for p in plaqs:
            finals = [labels[leg] if leg in dirty else mult[configs[:, col[p]], shifts[leg]] for leg in plaq_legs[p]]
            for final in finals[1:]:
                on_support &= final == finals[0]
            for final in finals:
                fixed &= final == configs[:, col[p]]
        for leg in dangling:
            on_support &= labels[leg] == 0
            fixed &= labels[leg] == 0
        components.append(ComponentScan(tuple(plaqs), configs, exps, on_support, fixed, D, n))

    value = np.exp(2j * np.pi * constant / D)
    for comp in components:
        value *= comp.value()
    exact = all(c.exact for c in components)
    phase = None
    if exact:
        phase = Phase.of(constant + sum(int(c.exponents[0]) for c in components), D)
    rigid_still = all(shifts[leg] == 0 for leg in range(geom.leg_count) if leg not in dirty)
    fixes = rigid_still and all(bool(c.fixed.all()) for c in components)
    return PatchOverlap(
        phase=phase,
        value=complex(value),
        magnitude=1.0 if exact else float(abs(value)),
        damaged=(),
        components=tuple(components),
        constant_exponent=constant,
        denominator=D,
        fixes_support=fixes,
    )


def factor_on_support(overlap: PatchOverlap) -> Tuple[Dict[int, np.ndarray], int]:
    """
    Split a diagonal-on-support operator's phase into one-plaquette factors.

    Returns:
        (plaquette -> exponent table d_P with d_P(e) = 0, scalar exponent), over overlap.denominator

    Raises:
        MathematicalFailure: NOT_DIAGONAL if the operator moves support configurations,
            NOT_FACTORIZABLE if the phase couples plaquettes
    """
    if not overlap.fixes_support:
        raise MathematicalFailure(ErrorKind.NOT_DIAGONAL, "Operator does not fix the state's support pointwise")
    D = overlap.denominator
    scalar = overlap.constant_exponent
    factors: Dict[int, np.ndarray] = {}
    for comp in overlap.components:
        k = len(comp.plaquettes)
        n = comp.order
        s = int(comp.exponents[0])
        scalar += s
        rebuilt = np.full(comp.configs.shape[0], s, dtype=np.int64)
        for i, p in enumerate(comp.plaquettes):
            stride = n ** (k - 1 - i)
            table = (comp.exponents[np.arange(n) * stride] - s) % D
            factors[p] = table
            rebuilt += table[comp.configs[:, i]]
        bad = np.argwhere((rebuilt - comp.exponents) % D)
        if bad.size:
            row = comp.configs[int(bad[0][0])]
            raise MathematicalFailure(
                ErrorKind.NOT_FACTORIZABLE,
                "Phase on the support couples plaquettes",
                {"plaquettes": list(comp.plaquettes), "labels": [int(v) for v in row]},
            )
    return factors, scalar % D
