"""Diagonalization of integer matrices and linear congruence solving.

The elimination follows the usual Smith normal form recipe with extended-gcd
row and column combinations, but stops at a diagonal form: divisibility of the
diagonal entries is not needed to decide solvability modulo M.
"""

import logging
from dataclasses import dataclass
from typing import List, Optional, Sequence

logger = logging.getLogger(__name__)


def xgcd(a: int, b: int):
    # invariants:
    #          x * a +      y * b ==      g
    #     next_x * a + next_y * b == next_g
    x, next_x = 1, 0
    y, next_y = 0, 1
    g, next_g = a, b
    while next_g:
        q = g // next_g
        x, next_x = next_x, x - q * next_x
        y, next_y = next_y, y - q * next_y
        g, next_g = next_g, g - q * next_g
    if g < 0:
        x, y, g = -x, -y, -g
    return x, y, g


@dataclass
class Diagonalization:
    """S A T = D with D diagonal; S is only recorded through its action on rhs"""
    diagonal: List[int]
    rank: int
    rhs: List[int]
    transform: List[List[int]]
    rows: int
    cols: int


def diagonalize(matrix: Sequence[Sequence[int]], num_cols: int, rhs: Sequence[int]) -> Diagonalization:
    """
    Reduce an integer matrix to diagonal form by unimodular row and column operations.

    Row operations are replayed on rhs; column operations accumulate in the
    transform T so that a solution z of D z = S b gives x = T z.

    Args:
        matrix: rows of Python integers
        num_cols: column count (rows may be empty)
        rhs: right-hand side, one entry per row

    Returns:
        Diagonalization with the transformed rhs and T
    """
    D = [list(row) for row in matrix]
    b = list(rhs)
    m, n = len(D), num_cols
    for row in D:
        assert len(row) == n
    T = [[int(i == j) for j in range(n)] for i in range(n)]

    def swap_rows(i1, i2):
        D[i1], D[i2] = D[i2], D[i1]
        b[i1], b[i2] = b[i2], b[i1]

    def swap_cols(j1, j2):
        for row in D:
            row[j1], row[j2] = row[j2], row[j1]
        for row in T:
            row[j1], row[j2] = row[j2], row[j1]

    def improve_with_row_ops(i1, i2, j):
        Di1, Di2 = D[i1], D[i2]
        a, c = Di1[j], Di2[j]
        if c == 0:
            return
        if c % a == 0:
            q = -(c // a)
            for jj in range(j, n):
                Di2[jj] += q * Di1[jj]
            b[i2] += q * b[i1]
            return
        x, y, g = xgcd(a, c)
        mcg, ag = -c // g, a // g
        for jj in range(j, n):
            aa, cc = Di1[jj], Di2[jj]
            Di1[jj] = x * aa + y * cc
            Di2[jj] = mcg * aa + ag * cc
        bb1, bb2 = b[i1], b[i2]
        b[i1] = x * bb1 + y * bb2
        b[i2] = mcg * bb1 + ag * bb2

    def improve_with_col_ops(j1, j2, i):
        a, c = D[i][j1], D[i][j2]
        if c == 0:
            return
        if c % a == 0:
            q = -(c // a)
            for row in D:
                row[j2] += q * row[j1]
            for row in T:
                row[j2] += q * row[j1]
            return
        x, y, g = xgcd(a, c)
        mcg, ag = -c // g, a // g
        for rows in (D, T):
            for row in rows:
                aa, cc = row[j1], row[j2]
                row[j1] = x * aa + y * cc
                row[j2] = mcg * aa + ag * cc

    rank = 0
    for k in range(min(m, n)):
        # full pivoting: smallest nonzero magnitude in the remaining block
        best = None
        for i in range(k, m):
            row = D[i]
            for j in range(k, n):
                v = row[j]
                if v and (best is None or abs(v) < best[0]):
                    best = (abs(v), i, j)
                    if best[0] == 1:
                        break
            if best is not None and best[0] == 1:
                break
        if best is None:
            break
        _, pi, pj = best
        if pi != k:
            swap_rows(k, pi)
        if pj != k:
            swap_cols(k, pj)
        while True:
            for i in range(k + 1, m):
                improve_with_row_ops(k, i, k)
            if all(D[k][j] == 0 for j in range(k + 1, n)):
                break
            for j in range(k + 1, n):
                improve_with_col_ops(k, j, k)
            if all(D[i][k] == 0 for i in range(k + 1, m)):
                break
        rank += 1

    diagonal = [D[i][i] for i in range(rank)]
    return Diagonalization(diagonal=diagonal, rank=rank, rhs=b, transform=T, rows=m, cols=n)


def solve_mod(matrix: Sequence[Sequence[int]], num_cols: int, rhs: Sequence[int], modulus: int) -> Optional[List[int]]:
    """
    Solve A x = b (mod M) over the integers.

    Args:
        matrix: integer matrix A as rows
        num_cols: number of unknowns
        rhs: integer vector b
        modulus: M >= 1

    Returns:
        A solution with entries in [0, M), or None if the system is inconsistent
    """
    diag = diagonalize(matrix, num_cols, rhs)
    z = [0] * num_cols
    for i, d in enumerate(diag.diagonal):
        c = diag.rhs[i] % modulus
        _, _, g = xgcd(d % modulus, modulus)
        if c % g:
            return None
        reduced_mod = modulus // g
        inv, _, _ = xgcd((d // g) % reduced_mod, reduced_mod)
        z[i] = ((c // g) * inv) % reduced_mod
    for i in range(diag.rank, diag.rows):
        if diag.rhs[i] % modulus:
            return None
    T = diag.transform
    x = [sum(T[r][j] * z[j] for j in range(num_cols)) % modulus for r in range(num_cols)]
    logger.debug(f"Solved {diag.rows}x{num_cols} congruence system mod {modulus}, rank {diag.rank}")
    return x
