import logging
from typing import List, Optional, Tuple

import numpy as np

from src.models import ErrorKind, InputError, MathematicalFailure
from .cochains import Cochain2, Cochain3, check_cocycle, coboundary, trivial_cochain2
from .group import FiniteGroup, GroupElement
from .smith import solve_mod

logger = logging.getLogger(__name__)


def coboundary_matrix(group: FiniteGroup, rows: Optional[List[Tuple[int, int, int]]] = None) -> List[List[int]]:
    """
    Integer matrix of d: C^2 -> C^3 in exponent coordinates.

    Row (g, h, k) has +1 at columns (h, k) and (g, hk), -1 at (gh, k) and (g, h),
    with column (a, b) at index a * |G| + b.

    Args:
        group: the group
        rows: triples to include, all |G|^3 in lexicographic order by default

    Returns:
        Matrix as a list of rows
    """
    n = group.order
    if rows is None:
        rows = [(g, h, k) for g in range(n) for h in range(n) for k in range(n)]
    matrix = []
    for g, h, k in rows:
        row = [0] * (n * n)
        row[h * n + k] += 1
        row[g * n + group.mul(h, k)] += 1
        row[group.mul(g, h) * n + k] -= 1
        row[g * n + h] -= 1
        matrix.append(row)
    return matrix


def _solve_coboundary(group: FiniteGroup, targets: np.ndarray, denominator: int, rows) -> Optional[Cochain2]:
    n = group.order
    modulus = denominator * n
    matrix = coboundary_matrix(group, rows)
    rhs = [int(targets[r]) * n for r in rows]
    solution = solve_mod(matrix, n * n, rhs, modulus)
    if solution is None:
        return None
    return Cochain2(group, modulus, np.array(solution, dtype=object).reshape(n, n), "mu").reduced()


def same_class(omega1: Cochain3, omega2: Cochain3) -> Optional[Cochain2]:
    """
    Decide whether omega1 / omega2 is a coboundary.

    The unknown exponents of mu are taken in (1/M) Z with M = m |G|, m the
    common denominator of the ratio, and the congruence system d(mu) = ratio
    is solved by integer diagonalization.

    Args:
        omega1: first cochain
        omega2: second cochain on the same group

    Returns:
        A witness mu with d(mu) = omega1 / omega2, or None for distinct classes
    """
    if omega1.group != omega2.group:
        raise InputError(ErrorKind.GROUP_MISMATCH, "Cannot compare cochains on different groups")
    ratio = omega1 / omega2
    group = ratio.group
    n = group.order
    rows = [(g, h, k) for g in range(n) for h in range(n) for k in range(n)]
    mu = _solve_coboundary(group, ratio.exponents, ratio.denominator, rows)
    if mu is None:
        logger.debug(f"{omega1.name} and {omega2.name} are in distinct classes")
        return None
    if not coboundary(mu).equals(ratio):
        raise MathematicalFailure(
            ErrorKind.INTERNAL_INCONSISTENCY,
            "Congruence solver returned a witness whose coboundary does not match",
        )
    return mu.renamed(f"witness[{omega1.name}~{omega2.name}]")


def normalize(omega: Cochain3) -> Tuple[Cochain3, Cochain2]:
    """
    Cohomologous representative with omega(g,h,k) = 1 whenever an argument is the identity.

    Args:
        omega: a cocycle

    Returns:
        (omega * d(mu), mu)
    """
    if omega.is_normalized():
        return omega, trivial_cochain2(omega.group)
    if not check_cocycle(omega).passed:
        raise InputError(ErrorKind.INVALID_INPUT, f"{omega.name} is not a cocycle and cannot be normalized")
    group = omega.group
    n = group.order
    rows = [
        (g, h, k)
        for g in range(n)
        for h in range(n)
        for k in range(n)
        if g == 0 or h == 0 or k == 0
    ]
    mu = _solve_coboundary(group, (-omega.exponents) % omega.denominator, omega.denominator, rows)
    if mu is None:
        raise MathematicalFailure(
            ErrorKind.INTERNAL_INCONSISTENCY,
            f"No normalizing coboundary found for cocycle {omega.name}",
        )
    normalized = (omega * coboundary(mu)).renamed(f"{omega.name}:normalized")
    if not normalized.is_normalized():
        raise MathematicalFailure(ErrorKind.INTERNAL_INCONSISTENCY, "Normalization post-check failed")
    return normalized, mu


def identify_cyclic_level(omega: Cochain3, generator: GroupElement) -> int:
    """
    Gauge-invariant level of a cocycle on a cyclic group.

    exp(2 pi i p / n) = prod_{j=0}^{n-1} omega(g, g^j, g) for the generator g.

    Args:
        omega: a cocycle on a cyclic group of order n
        generator: generating element g

    Returns:
        p in [0, n)
    """
    group = omega.group
    n = group.order
    if group.element_order(generator) != n:
        raise InputError(
            ErrorKind.NOT_CYCLIC_CONSISTENT,
            f"Element {generator} does not generate {group.name}",
        )
    total = 0
    power = 0
    for _ in range(n):
        total += int(omega.exponents[generator, power, generator])
        power = group.mul(power, generator)
    m = omega.denominator
    if (total * n) % m:
        raise MathematicalFailure(
            ErrorKind.NOT_CYCLIC_CONSISTENT,
            f"Product of omega(g, g^j, g) for {omega.name} is not an n-th root of unity",
        )
    return (total * n // m) % n
