"""Small exact linear-algebra helpers over Fractions and coefficient rings."""

from __future__ import annotations

from fractions import Fraction
from typing import Sequence


def rref(rows: Sequence[Sequence[Fraction]]) -> tuple[list[list[Fraction]], list[int]]:
    """Reduced row echelon form and pivot columns."""
    m = [list(map(Fraction, r)) for r in rows]
    if not m:
        return m, []
    ncols = len(m[0])
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        p = next((i for i in range(r, len(m)) if m[i][c]), None)
        if p is None:
            continue
        m[r], m[p] = m[p], m[r]
        inv = 1 / m[r][c]
        m[r] = [v * inv for v in m[r]]
        for i in range(len(m)):
            if i != r and m[i][c]:
                f = m[i][c]
                m[i] = [a - f * b for a, b in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
        if r == len(m):
            break
    return m, pivots


def rank(rows: Sequence[Sequence[Fraction]]) -> int:
    return len(rref(rows)[1])


def independent_rows(rows: Sequence[Sequence[Fraction]]) -> tuple[list[int], list[int]]:
    """Greedy (first-come) maximal independent row subset and matching pivot columns.

    The square submatrix on the returned rows and columns is invertible.
    """
    chosen: list[int] = []
    basis: list[list[Fraction]] = []
    pivcols: list[int] = []
    for i, row in enumerate(rows):
        v = list(map(Fraction, row))
        for b, pc in zip(basis, pivcols):
            if v[pc]:
                f = v[pc] / b[pc]
                v = [a - f * x for a, x in zip(v, b)]
        pc = next((j for j, a in enumerate(v) if a), None)
        if pc is None:
            continue
        chosen.append(i)
        basis.append(v)
        pivcols.append(pc)
    return chosen, sorted(pivcols)


def solve(a: Sequence[Sequence[Fraction]], b: Sequence[Fraction]) -> list[Fraction] | None:
    """One solution of ``a @ x = b`` (free variables set to zero), or None."""
    if not a:
        return [] if not any(b) else None
    n = len(a[0])
    aug = [list(map(Fraction, row)) + [Fraction(v)] for row, v in zip(a, b)]
    m, piv = rref(aug)
    if n in piv:
        return None
    x = [Fraction(0)] * n
    for row, c in zip(m, piv):
        x[c] = row[n]
    return x


def symbolic_det(matrix: Sequence[Sequence], zero, cols: Sequence[int] | None = None):
    """Determinant of a square matrix over a commutative ring (Laplace, memoised).

    ``matrix`` rows are indexed in order; ``cols`` selects the columns (default:
    all).  Only ``+``, ``-`` (via negation), ``*`` and ``is_zero`` are used, so
    no division is ever needed.
    """
    cols = tuple(range(len(matrix[0]))) if cols is None else tuple(cols)
    n = len(matrix)
    if n != len(cols):
        raise ValueError("determinant of a non-square selection")
    memo: dict = {}

    def det(r: int, cs: tuple[int, ...]):
        if r == n:
            return None  # empty product marker
        key = (r, cs)
        if key in memo:
            return memo[key]
        total = zero
        for k, c in enumerate(cs):
            e = matrix[r][c]
            if e.is_zero():
                continue
            sub = det(r + 1, cs[:k] + cs[k + 1 :])
            if sub is not None and sub.is_zero():
                continue
            term = e if sub is None else e * sub
            total = total - term if k % 2 else total + term
        memo[key] = total
        return total

    out = det(0, cols)
    return zero + 1 if out is None else out


def cofactor_matrix(matrix: Sequence[Sequence], zero) -> list[list]:
    """Cofactor matrix C with sum_k C[i][k] M[j][k] = delta_ij det(M)."""
    n = len(matrix)
    out = []
    for i in range(n):
        row = []
        rows = [matrix[r] for r in range(n) if r != i]
        for k in range(n):
            cols = [c for c in range(n) if c != k]
            d = symbolic_det(rows, zero, cols) if rows else zero + 1
            row.append(-d if (i + k) % 2 else d)
        out.append(row)
    return out
