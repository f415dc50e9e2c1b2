"""
Monomial operators on a register chain.

A monomial operator is an ordered product of local factors (register shifts,
register diagonals, link diagonals) times a global phase. Bras are threaded
through the factors left to right: <c| U = phase <c'|. Since every shift is
unconditional, the net effect of any product reduces to a per-register right
multiplication plus a phase that is a sum of one-register and nearest-neighbour
terms in the original labels (the normal form). Classification and
factorization are decided exactly on that normal form; brute-force enumeration
of configurations is kept as an independent cross-check.
"""
import logging
import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Any, Dict, Iterator, List, Optional, Sequence, Set, Tuple

import numpy as np

from src.algebra import FiniteGroup, Phase, require_int64_denominator
from src.models import ErrorKind, InputError, MathematicalFailure, OperatorKind, ScanMode
from src.settings import get_settings
from .chain import BasisConfig, RegisterChain
from .factors import FactorKind, LocalFactor

logger = logging.getLogger(__name__)

_BATCH_ROWS = 1 << 16


@dataclass(frozen=True)
class Classification:
    """Outcome of classify: kind, minimal support and the scalar value if any"""
    kind: OperatorKind
    support: Tuple[int, ...]
    scalar: Optional[Phase] = None
    scan: Optional[ScanMode] = None


@dataclass(frozen=True, eq=False)
class DiagonalFactorization:
    """U = s * prod_x d_x(l_x), exponents over one denominator.

    tables[x][l] is the exponent of d_x(l), with d_x(e) = 1 for every x.
    """
    chain: RegisterChain
    denominator: int
    tables: np.ndarray
    scalar_exponent: int
    scan: Optional[ScanMode] = None

    @property
    def scalar(self) -> Phase:
        return Phase.of(self.scalar_exponent, self.denominator)

    def factor(self, x: int) -> np.ndarray:
        return self.tables[x]

    def support(self) -> List[int]:
        return [x for x in range(self.chain.register_count) if np.any(self.tables[x] % self.denominator)]


@dataclass(frozen=True, eq=False)
class NormalForm:
    """Net shift per register plus the phase as local tables of the original labels"""
    chain: RegisterChain
    denominator: int
    shifts: np.ndarray
    register_tables: np.ndarray
    link_tables: np.ndarray
    constant: int

    def has_link(self, x: int) -> bool:
        return self.chain.is_link(x)

    def identity_exponent(self) -> int:
        total = self.constant + sum(int(v) for v in self.register_tables[:, 0])
        total += sum(int(self.link_tables[x, 0, 0]) for x in range(self.chain.register_count) if self.has_link(x))
        return total % self.denominator

    def exponents(self, labels: np.ndarray) -> np.ndarray:
        """Phase exponent of every row of an (N, R) label array"""
        total = np.full(labels.shape[0], self.constant, dtype=np.int64)
        for x in range(self.chain.register_count):
            total = (total + self.register_tables[x][labels[:, x]]) % self.denominator
            if self.has_link(x):
                total = (total + self.link_tables[x][labels[:, x], labels[:, x + 1]]) % self.denominator
        return total

    def outputs(self, labels: np.ndarray) -> np.ndarray:
        mult = self.chain.group.mult
        out = np.empty_like(labels)
        for x in range(self.chain.register_count):
            out[:, x] = mult[labels[:, x], self.shifts[x]]
        return out

    def moved(self) -> Set[int]:
        return {x for x in range(self.chain.register_count) if self.shifts[x] != 0}

    def phase_dependence(self) -> Set[int]:
        """Registers x such that the phase changes with l_x for some fixed remaining labels"""
        n, D = self.chain.group.order, self.denominator
        dependent = set()
        for x in range(self.chain.register_count):
            local = np.broadcast_to(self.register_tables[x][None, :, None], (n, n, n)).copy()
            if self.has_link(x - 1):
                local += self.link_tables[x - 1][:, :, None]
            if self.has_link(x):
                local += self.link_tables[x][None, :, :]
            if np.any((local - local[:, :1, :]) % D):
                dependent.add(x)
        return dependent

    def mixed_witness(self) -> Optional[Tuple[int, int, int]]:
        """First (x, a, b) where the link table at x is not a sum of one-register terms"""
        D = self.denominator
        for x in range(self.chain.register_count):
            if not self.has_link(x):
                continue
            t = self.link_tables[x]
            mixed = (t - t[:, :1] - t[:1, :] + t[0, 0]) % D
            hits = np.argwhere(mixed)
            if hits.size:
                a, b = hits[0]
                return x, int(a), int(b)
        return None


@dataclass(frozen=True, eq=False)
class MonomialOp:
    """Ordered product of local factors times a global phase"""
    chain: RegisterChain
    factors: Tuple[LocalFactor, ...] = ()
    global_phase: Phase = field(default_factory=Phase.one)
    name: str = ""

    def __post_init__(self):
        object.__setattr__(self, "factors", tuple(self.factors))
        group = self.chain.group
        for f in self.factors:
            if f.kind == FactorKind.LINK_DIAGONAL:
                if not self.chain.is_link(f.register):
                    raise InputError(
                        ErrorKind.CHAIN_MISMATCH,
                        f"Link factor at {f.register} does not join two registers of one block",
                    )
            elif not 0 <= f.register < self.chain.register_count:
                raise InputError(ErrorKind.CHAIN_MISMATCH, f"Factor register {f.register} outside the chain")
            if f.kind == FactorKind.SHIFT:
                group.check_element(f.element)
            elif f.table.shape != (group.order,) * len(f.registers):
                raise InputError(ErrorKind.MALFORMED_TABLE, f"Factor table shape {f.table.shape} does not fit the group")

    @property
    def denominator(self) -> int:
        dens = [f.denominator for f in self.factors if f.kind != FactorKind.SHIFT]
        return math.lcm(self.global_phase.denominator, *dens) if dens else self.global_phase.denominator

    @cached_property
    def normal_form(self) -> NormalForm:
        chain, group = self.chain, self.chain.group
        n, R, D = group.order, chain.register_count, self.denominator
        require_int64_denominator(D, f"operator {self.name or '<op>'}")
        shifts = np.zeros(R, dtype=np.int64)
        reg = np.zeros((R, n), dtype=np.int64)
        link = np.zeros((R, n, n), dtype=np.int64)
        for f in self.factors:
            x = f.register
            if f.kind == FactorKind.SHIFT:
                shifts[x] = group.mult[shifts[x], f.element]
                continue
            scale = D // f.denominator
            if f.kind == FactorKind.REGISTER_DIAGONAL:
                reg[x] = (reg[x] + f.table[group.mult[:, shifts[x]]] * scale) % D
            else:
                rows, cols = group.mult[:, shifts[x]], group.mult[:, shifts[x + 1]]
                link[x] = (link[x] + f.table[np.ix_(rows, cols)] * scale) % D
        constant = self.global_phase.numerator * (D // self.global_phase.denominator)
        return NormalForm(chain, D, shifts, reg % D, link % D, constant % D)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "name": self.name,
            "group": {"order": self.chain.group.order, "table": self.chain.group.mult.tolist()},
            "length": self.chain.length,
            "cut": self.chain.cut,
            "blocks": self.chain.blocks,
            "global_phase": self.global_phase.label(),
            "factors": [f.to_dict() for f in self.factors],
        }

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "MonomialOp":
        group = FiniteGroup.from_table(data["group"]["table"])
        chain = RegisterChain(group, int(data["length"]), int(data["cut"]), int(data.get("blocks", 1)))
        factors = tuple(LocalFactor.from_dict(f) for f in data["factors"])
        return cls(chain, factors, Phase(Fraction(data.get("global_phase", "0"))), data.get("name", ""))


def identity_op(chain: RegisterChain) -> MonomialOp:
    return MonomialOp(chain, (), Phase.one(), "1")


def scalar_op(chain: RegisterChain, phase: Phase, name: str = "") -> MonomialOp:
    return MonomialOp(chain, (), phase, name)


def _check_same_chain(a: MonomialOp, b: MonomialOp) -> None:
    if a.chain.group != b.chain.group:
        raise InputError(ErrorKind.GROUP_MISMATCH, "Operators are defined over different groups")
    if not a.chain.compatible(b.chain):
        raise InputError(ErrorKind.CHAIN_MISMATCH, "Operators act on different chains")


def apply(op: MonomialOp, config: Sequence[int]) -> Tuple[BasisConfig, Phase]:
    """
    Thread a basis bra through the operator.

    Args:
        op: Operator U
        config: Labels c

    Returns:
        (c', phase) with <c| U = phase <c'|
    """
    labels = list(op.chain.check_config(tuple(config)))
    exponent = op.global_phase.exponent
    for f in op.factors:
        k = f.apply(labels, op.chain.group)
        if k:
            exponent += Fraction(k, f.denominator)
    return tuple(labels), Phase(exponent)


def compose(a: MonomialOp, b: MonomialOp, name: str = "") -> MonomialOp:
    """Product AB: a bra is threaded through A first, then B"""
    _check_same_chain(a, b)
    return MonomialOp(a.chain, a.factors + b.factors, a.global_phase * b.global_phase, name)


def compose_all(chain: RegisterChain, ops: Sequence[MonomialOp], name: str = "") -> MonomialOp:
    result = identity_op(chain)
    for op in ops:
        result = compose(result, op)
    return MonomialOp(chain, result.factors, result.global_phase, name)


def inverse(op: MonomialOp) -> MonomialOp:
    group = op.chain.group
    factors = tuple(f.inverse(group) for f in reversed(op.factors))
    return MonomialOp(op.chain, factors, op.global_phase.inverse(), f"({op.name})^-1" if op.name else "")


def conjugate(a: MonomialOp, b: MonomialOp, name: str = "") -> MonomialOp:
    """B A B^-1"""
    return compose(b, compose(a, inverse(b)), name)


def tensor(a: MonomialOp, b: MonomialOp) -> MonomialOp:
    """A (x) B on the concatenated chain; B's registers follow A's"""
    ca, cb = a.chain, b.chain
    if ca.group != cb.group:
        raise InputError(ErrorKind.GROUP_MISMATCH, "Tensor factors use different groups")
    if ca.length != cb.length or ca.cut != cb.cut:
        raise InputError(ErrorKind.CHAIN_MISMATCH, "Tensor factors must use chains of equal length and cut")
    chain = RegisterChain(ca.group, ca.length, ca.cut, ca.blocks + cb.blocks)
    offset = ca.register_count
    moved = tuple(
        LocalFactor(f.kind, f.register + offset, f.element, f.table, f.denominator) for f in b.factors
    )
    name = f"{a.name}(x){b.name}" if a.name or b.name else ""
    return MonomialOp(chain, a.factors + moved, a.global_phase * b.global_phase, name)


def _verified_scan(op: MonomialOp, verify: Optional[bool], rng: Optional[np.random.Generator]) -> Optional[ScanMode]:
    """Cross-check the normal form when asked to; returns the scan mode used or None"""
    if verify is None:
        verify = get_settings().verify_scans
    if not verify:
        return None
    mode, bad = crosscheck(op, rng=rng)
    if bad is not None:
        raise MathematicalFailure(
            ErrorKind.CROSSCHECK_FAILURE,
            f"Normal form of {op.name or '<op>'} disagrees with threading at {list(bad)}",
            {"config": list(bad), "scan": mode.value},
        )
    return mode


def classify(
    op: MonomialOp,
    verify: Optional[bool] = None,
    rng: Optional[np.random.Generator] = None,
) -> Classification:
    """
    Decide whether U is a scalar, diagonal or general monomial and find its support.

    The support is the set of registers that are moved or on whose label the
    phase depends. The decision is read off the normal form and is exact for
    every configuration. With verify, the normal form is also compared against
    factor-by-factor threading: exhaustively when |G|^(M+1) is within the
    exhaustive budget, on SPT_SAMPLE_SIZE random configurations above it.

    Args:
        op: Operator to classify
        verify: Run the threading comparison (defaults to SPT_VERIFY_SCANS)
        rng: Generator for sampled comparisons

    Returns:
        Classification with the scalar value when kind is scalar, and the
        comparison mode in scan (None when no comparison ran)

    Raises:
        MathematicalFailure: CROSSCHECK_FAILURE if the comparison finds a disagreement
    """
    scan = _verified_scan(op, verify, rng)
    nf = op.normal_form
    moved = nf.moved()
    dependent = nf.phase_dependence()
    support = tuple(sorted(moved | dependent))
    if moved:
        kind, scalar = OperatorKind.GENERAL, None
    elif not dependent:
        kind, scalar = OperatorKind.SCALAR, Phase.of(nf.identity_exponent(), nf.denominator)
    else:
        kind, scalar = OperatorKind.DIAGONAL, None
    logger.debug(f"classify {op.name or '<op>'}: {kind.value} on {list(support)}")
    return Classification(kind, support, scalar, scan)


def factor_diagonal(
    op: MonomialOp,
    verify: Optional[bool] = None,
    rng: Optional[np.random.Generator] = None,
) -> DiagonalFactorization:
    """
    Write a diagonal U as s * prod_x d_x(l_x) with d_x(e) = 1.

    verify and rng behave as in classify.

    Raises:
        MathematicalFailure: NOT_DIAGONAL if U moves labels, NOT_FACTORIZABLE
            with a witness configuration if the phase couples two registers
    """
    chain, nf = op.chain, op.normal_form
    moved = sorted(nf.moved())
    if moved:
        raise MathematicalFailure(
            ErrorKind.NOT_DIAGONAL,
            f"Operator {op.name or '<op>'} moves registers {moved}",
            {"registers": moved},
        )
    witness = nf.mixed_witness()
    if witness is not None:
        x, a, b = witness
        config = [0] * chain.register_count
        config[x], config[x + 1] = a, b
        raise MathematicalFailure(
            ErrorKind.NOT_FACTORIZABLE,
            f"Phase of {op.name or '<op>'} couples registers {x} and {x + 1}",
            {"config": config, "registers": [x, x + 1]},
        )
    D, R = nf.denominator, chain.register_count
    tables = np.zeros((R, chain.group.order), dtype=np.int64)
    for x in range(R):
        d = nf.register_tables[x] - nf.register_tables[x][0]
        if nf.has_link(x):
            d = d + nf.link_tables[x][:, 0] - nf.link_tables[x][0, 0]
        if nf.has_link(x - 1):
            d = d + nf.link_tables[x - 1][0, :] - nf.link_tables[x - 1][0, 0]
        tables[x] = d % D
    return DiagonalFactorization(chain, D, tables, nf.identity_exponent(), _verified_scan(op, verify, rng))


def diagonal_from_tables(
    chain: RegisterChain,
    tables: Dict[int, np.ndarray],
    denominator: int,
    scalar_exponent: int = 0,
    name: str = "",
) -> MonomialOp:
    """Product of register diagonals, skipping trivial tables"""
    require_int64_denominator(denominator, name or "register diagonals")
    factors = []
    for x in sorted(tables):
        t = np.asarray(tables[x], dtype=np.int64) % denominator
        if np.any(t):
            factors.append(LocalFactor(FactorKind.REGISTER_DIAGONAL, x, table=t, denominator=denominator))
    return MonomialOp(chain, tuple(factors), Phase.of(scalar_exponent, denominator), name)


def same_operator(a: MonomialOp, b: MonomialOp) -> bool:
    """True iff A and B act identically on every bra"""
    c = classify(compose(a, inverse(b)))
    return c.kind == OperatorKind.SCALAR and c.scalar.is_one()


def _configs_from_indices(indices: np.ndarray, n: int, registers: int) -> np.ndarray:
    labels = np.empty((indices.shape[0], registers), dtype=np.int64)
    rest = indices.copy()
    for x in range(registers - 1, -1, -1):
        labels[:, x] = rest % n
        rest //= n
    return labels


def iter_configs(
    chain: RegisterChain,
    mode: Optional[ScanMode] = None,
    rng: Optional[np.random.Generator] = None,
) -> Tuple[ScanMode, Iterator[np.ndarray]]:
    """
    Configurations to scan, in batches.

    Chains within the exhaustive budget are scanned completely; larger ones
    are sampled uniformly. Asking for an exhaustive scan above the budget
    raises BUDGET_EXCEEDED.
    """
    settings = get_settings()
    n, R = chain.group.order, chain.register_count
    total = chain.basis_size
    if mode is None:
        mode = ScanMode.EXHAUSTIVE if total <= settings.exhaustive_budget else ScanMode.SAMPLED
    if mode == ScanMode.EXHAUSTIVE and total > settings.exhaustive_budget:
        raise InputError(
            ErrorKind.BUDGET_EXCEEDED,
            f"Exhaustive scan of {total} configurations exceeds budget {settings.exhaustive_budget}",
        )

    def batches() -> Iterator[np.ndarray]:
        if mode == ScanMode.EXHAUSTIVE:
            for start in range(0, total, _BATCH_ROWS):
                idx = np.arange(start, min(start + _BATCH_ROWS, total), dtype=np.int64)
                yield _configs_from_indices(idx, n, R)
        else:
            gen = rng if rng is not None else np.random.default_rng(0)
            remaining = settings.sample_size
            while remaining > 0:
                rows = min(remaining, _BATCH_ROWS)
                yield gen.integers(0, n, size=(rows, R), dtype=np.int64)
                remaining -= rows

    if mode == ScanMode.SAMPLED:
        logger.warning(f"Basis of {total} configurations exceeds the exhaustive budget; sampling {settings.sample_size}")
    return mode, batches()


def thread_batch(op: MonomialOp, labels: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    """Thread every row through the factors one by one; returns (outputs, exponents over op.denominator)"""
    D = op.denominator
    out = labels.copy()
    total = np.full(labels.shape[0], op.global_phase.numerator * (D // op.global_phase.denominator), dtype=np.int64)
    for f in op.factors:
        k = f.act(out, op.chain.group)
        if f.kind != FactorKind.SHIFT:
            total = (total + k * (D // f.denominator)) % D
    return out, total % D


def crosscheck(
    op: MonomialOp,
    mode: Optional[ScanMode] = None,
    rng: Optional[np.random.Generator] = None,
) -> Tuple[ScanMode, Optional[BasisConfig]]:
    """
    Compare the normal form against factor-by-factor threading.

    Returns:
        (scan mode, first disagreeing configuration or None)
    """
    nf = op.normal_form
    mode, batches = iter_configs(op.chain, mode, rng)
    for labels in batches:
        out, exps = thread_batch(op, labels)
        bad = np.any(out != nf.outputs(labels), axis=1) | (exps != nf.exponents(labels))
        if np.any(bad):
            row = labels[int(np.argmax(bad))]
            return mode, tuple(int(v) for v in row)
    return mode, None


def random_op(
    chain: RegisterChain,
    count: int,
    rng: np.random.Generator,
    denominator: int = 4,
    name: str = "R",
) -> MonomialOp:
    """Product of count random local factors with exponents in (1/denominator) Z"""
    n, R = chain.group.order, chain.register_count
    links = [x for x in range(R) if chain.is_link(x)]
    factors = []
    for _ in range(count):
        kind = int(rng.integers(0, 3 if links else 2))
        if kind == 0:
            factors.append(LocalFactor(FactorKind.SHIFT, int(rng.integers(0, R)), int(rng.integers(0, n))))
        elif kind == 1:
            table = rng.integers(0, denominator, size=n)
            factors.append(LocalFactor(FactorKind.REGISTER_DIAGONAL, int(rng.integers(0, R)), table=table, denominator=denominator))
        else:
            x = links[int(rng.integers(0, len(links)))]
            table = rng.integers(0, denominator, size=(n, n))
            factors.append(LocalFactor(FactorKind.LINK_DIAGONAL, x, table=table, denominator=denominator))
    phase = Phase.of(int(rng.integers(0, denominator)), denominator)
    return MonomialOp(chain, tuple(factors), phase, name)
