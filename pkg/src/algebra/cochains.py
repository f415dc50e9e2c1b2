import logging
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

import numpy as np

from src.models import CochainFile, CocycleCheckResult, ErrorKind, InputError
from .group import FiniteGroup, GroupElement, find_generator, make_cyclic
from .phase import Phase

logger = logging.getLogger(__name__)

# Sums of a handful of entries below this bound stay exact in int64
INT64_SAFE_DENOMINATOR = 1 << 58


def exponent_dtype(denominator: int):
    """int64 up to INT64_SAFE_DENOMINATOR, Python ints (object arrays) beyond"""
    return np.int64 if denominator <= INT64_SAFE_DENOMINATOR else object


def require_int64_denominator(denominator: int, what: str) -> None:
    """Reject denominators too large for the int64 operator tables"""
    if denominator > INT64_SAFE_DENOMINATOR:
        raise InputError(
            ErrorKind.UNSUPPORTED_DENOMINATOR,
            f"{what} needs denominator {denominator}, above the supported 2^58",
            {"denominator": str(denominator), "limit": str(INT64_SAFE_DENOMINATOR)},
        )


@dataclass(frozen=True, eq=False)
class Cochain:
    """U(1)-valued k-cochain stored as integer exponents over one denominator.

    The entry at index (g1, ..., gk) is exp(2 pi i * exponents[g1, ..., gk] / denominator).
    """
    group: FiniteGroup
    denominator: int
    exponents: np.ndarray
    name: str = field(default="")

    degree = 0

    def __post_init__(self):
        if self.denominator < 1:
            raise InputError(ErrorKind.UNSUPPORTED_DENOMINATOR, f"Denominator must be positive, got {self.denominator}")
        arr = np.asarray(self.exponents)
        expected = (self.group.order,) * self.degree
        if arr.shape != expected:
            raise InputError(
                ErrorKind.MALFORMED_TABLE,
                f"{type(self).__name__} table has shape {arr.shape}, expected {expected}",
            )
        if arr.dtype != object:
            arr = arr.astype(np.int64)
        arr = (arr.astype(object) % self.denominator).astype(exponent_dtype(self.denominator))
        arr.setflags(write=False)
        object.__setattr__(self, "exponents", arr)

    def value(self, *args: GroupElement) -> Phase:
        return Phase(Fraction(int(self.exponents[args]), self.denominator))

    def lifted(self, denominator: int) -> np.ndarray:
        """Exponents rescaled to a multiple of the current denominator"""
        if denominator % self.denominator:
            raise InputError(
                ErrorKind.UNSUPPORTED_DENOMINATOR,
                f"Cannot lift denominator {self.denominator} to {denominator}",
            )
        return self.exponents.astype(exponent_dtype(denominator)) * (denominator // self.denominator)

    def reduced(self):
        """Same cochain over the smallest possible denominator"""
        g = math.gcd(self.denominator, *[int(x) for x in np.unique(self.exponents)])
        return type(self)(self.group, self.denominator // g, self.exponents // g, self.name)

    def _combine(self, other, sign: int, name: str):
        if type(self) is not type(other):
            raise InputError(ErrorKind.INVALID_INPUT, "Cochains of different degree")
        if self.group != other.group:
            raise InputError(ErrorKind.GROUP_MISMATCH, "Cochains live on different groups")
        m = math.lcm(self.denominator, other.denominator)
        return type(self)(self.group, m, self.lifted(m) + sign * other.lifted(m), name).reduced()

    def __mul__(self, other):
        return self._combine(other, 1, f"({self.name})*({other.name})")

    def __truediv__(self, other):
        return self._combine(other, -1, f"({self.name})/({other.name})")

    def inverse(self):
        return type(self)(self.group, self.denominator, -self.exponents, f"({self.name})^-1")

    def power(self, k: int):
        return type(self)(self.group, self.denominator, self.exponents.astype(object) * k, f"({self.name})^{k}").reduced()

    def renamed(self, name: str):
        return type(self)(self.group, self.denominator, self.exponents, name)

    def with_entry(self, index, phase: Phase):
        """Copy with one entry overwritten"""
        m = math.lcm(self.denominator, phase.denominator)
        arr = self.lifted(m).copy()
        arr[tuple(index)] = phase.numerator * (m // phase.denominator)
        return type(self)(self.group, m, arr, f"{self.name}[{tuple(index)}]").reduced()

    def is_trivial(self) -> bool:
        return not np.any(self.exponents)

    def equals(self, other) -> bool:
        """Entrywise equality of phases"""
        return (self / other).is_trivial()

    def flat(self) -> list:
        return [int(x) for x in self.exponents.reshape(-1)]

    def to_model(self) -> CochainFile:
        """File model; the group is referenced by name"""
        return CochainFile(
            group=self.group.name,
            denominator=self.denominator,
            exponents=self.flat(),
            degree=self.degree,
        )


class Cochain2(Cochain):
    """2-cochain mu(g, h)"""
    degree = 2


class Cochain3(Cochain):
    """3-cochain omega(g, h, k)"""
    degree = 3

    def is_normalized(self) -> bool:
        """omega(g,h,k) = 1 whenever an argument is the identity"""
        e = self.exponents
        return not (np.any(e[0, :, :]) or np.any(e[:, 0, :]) or np.any(e[:, :, 0]))


def trivial_cochain3(group: FiniteGroup) -> Cochain3:
    n = group.order
    return Cochain3(group, 1, np.zeros((n, n, n), dtype=np.int64), f"{group.name}:trivial")


def trivial_cochain2(group: FiniteGroup) -> Cochain2:
    n = group.order
    return Cochain2(group, 1, np.zeros((n, n), dtype=np.int64), f"{group.name}:trivial2")


def standard_cyclic_cocycle(n: int, p: int, group: Optional[FiniteGroup] = None) -> Cochain3:
    """
    Standard representative of level p in H^3(Z_n, U(1)) = Z_n.

    omega_p(a, b, c) = exp(2 pi i p a (b + c - [(b + c) mod n]) / n^2), i.e. the
    exponent is p*a/n when b + c >= n and 0 otherwise.

    Args:
        n: order of the cyclic group
        p: level, 0 <= p < n
        group: optional cyclic group to attach (defaults to make_cyclic(n)); any other
            labeling of a cyclic group is read through the powers of its first generator

    Returns:
        Normalized Cochain3 over denominator n
    """
    if not 0 <= p < n:
        raise InputError(ErrorKind.LEVEL_OUT_OF_RANGE, f"Level {p} out of range for Z_{n}")
    natural = make_cyclic(n)
    group = group or natural
    if group.order != n:
        raise InputError(ErrorKind.GROUP_MISMATCH, f"Group of order {group.order} is not Z_{n}")
    log = np.arange(n)
    if group != natural:
        x = find_generator(group)
        if x is None:
            raise InputError(ErrorKind.NOT_CYCLIC_CONSISTENT, f"{group.name} is not cyclic")
        power = 0
        for j in range(n):
            log[power] = j
            power = group.mul(power, x)
    a = log[:, None, None]
    b = log[None, :, None]
    c = log[None, None, :]
    carry = (b + c) >= n
    exps = (p * a * carry) % n
    return Cochain3(group, n, exps, f"{group.name}:level{p}").reduced()


def check_cocycle(omega: Cochain3) -> CocycleCheckResult:
    """
    Exhaustive scan of omega(g,h,k) omega(g,hk,l) omega(h,k,l) = omega(gh,k,l) omega(g,h,kl).

    Args:
        omega: 3-cochain to check

    Returns:
        CocycleCheckResult with the first violating quadruple in lexicographic order
    """
    n = omega.group.order
    mult = omega.group.mult
    w = omega.exponents
    idx = np.arange(n)
    g = idx[:, None, None, None]
    h = idx[None, :, None, None]
    k = idx[None, None, :, None]
    l = idx[None, None, None, :]
    residual = (
        w[g, h, k] + w[g, mult[h, k], l] + w[h, k, l] - w[mult[g, h], k, l] - w[g, h, mult[k, l]]
    ) % omega.denominator
    bad = np.argwhere(residual != 0)
    if bad.size == 0:
        return CocycleCheckResult(passed=True)
    quad = [int(x) for x in bad[0]]
    res = Phase(Fraction(int(residual[tuple(quad)]), omega.denominator))
    logger.debug(f"Cocycle identity fails for {omega.name} at {quad}, residual {res.label()}")
    return CocycleCheckResult(passed=False, quadruple=quad, residual=res.label())


def coboundary(mu: Cochain2) -> Cochain3:
    """
    (d mu)(g,h,k) = mu(h,k) mu(g,hk) / (mu(gh,k) mu(g,h)).

    Args:
        mu: 2-cochain

    Returns:
        Cochain3 over the same denominator
    """
    n = mu.group.order
    mult = mu.group.mult
    m = mu.exponents
    idx = np.arange(n)
    g = idx[:, None, None]
    h = idx[None, :, None]
    k = idx[None, None, :]
    exps = m[h, k] + m[g, mult[h, k]] - m[mult[g, h], k] - m[g, h]
    return Cochain3(mu.group, mu.denominator, exps, f"d({mu.name})").reduced()


def random_cochain2(group: FiniteGroup, denominator: int, rng: np.random.Generator, name: str = "mu") -> Cochain2:
    """2-cochain with exponents drawn uniformly from (1/denominator) Z"""
    n = group.order
    exps = rng.integers(0, denominator, size=(n, n))
    return Cochain2(group, denominator, exps, name)
