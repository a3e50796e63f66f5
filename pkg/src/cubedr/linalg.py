"""Exact linear algebra over the rationals.

Matrices are lists of rows of :class:`Fraction` (or ints).  Rank uses
fraction-free elimination on integer-scaled rows; pivots are taken from the
first column holding a non-zero entry, top-most row first.
"""
from __future__ import annotations

from fractions import Fraction
from math import lcm
from typing import Sequence

Matrix = list


def zeros(r: int, c: int) -> Matrix:
    return [[Fraction(0)] * c for _ in range(r)]


def identity(n: int) -> Matrix:
    m = zeros(n, n)
    for i in range(n):
        m[i][i] = Fraction(1)
    return m


def shape(a: Matrix, cols: int | None = None) -> tuple[int, int]:
    if not a:
        return 0, (cols or 0)
    return len(a), len(a[0])


def matmul(a: Matrix, b: Matrix, inner: int | None = None, cols: int | None = None) -> Matrix:
    ra = len(a)
    k = len(b) if inner is None else inner
    cb = len(b[0]) if b else (cols or 0)
    out = zeros(ra, cb)
    for i in range(ra):
        row = a[i]
        oi = out[i]
        for t in range(k):
            x = row[t]
            if x:
                bt = b[t]
                for j in range(cb):
                    if bt[j]:
                        oi[j] += x * bt[j]
    return out


def matvec(a: Matrix, v: Sequence) -> list:
    return [sum((x * y for x, y in zip(row, v) if x and y), Fraction(0)) for row in a]


def transpose(a: Matrix, cols: int | None = None) -> Matrix:
    if not a:
        return [[] for _ in range(cols or 0)]
    return [list(r) for r in zip(*a)]


def hstack(*blocks: Matrix) -> Matrix:
    rows = max(len(b) for b in blocks)
    out = [[] for _ in range(rows)]
    for b in blocks:
        if not b:
            continue
        for i in range(rows):
            out[i].extend(b[i])
    return out


def is_zero(a: Matrix) -> bool:
    return all(not x for row in a for x in row)


def _integer_rows(a: Matrix) -> list[list[int]]:
    out = []
    for row in a:
        den = 1
        for x in row:
            if isinstance(x, Fraction) and x.denominator != 1:
                den = lcm(den, x.denominator)
        out.append([int(Fraction(x) * den) for x in row])
    return out


def rank(a: Matrix) -> int:
    """Rank by fraction-free (Bareiss) elimination."""
    if not a or not a[0]:
        return 0
    m = _integer_rows(a)
    rows, cols = len(m), len(m[0])
    r = 0
    prev = 1
    for c in range(cols):
        piv = next((i for i in range(r, rows) if m[i][c]), None)
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        pr = m[r]
        pv = pr[c]
        for i in range(r + 1, rows):
            mi = m[i]
            f = mi[c]
            if f:
                m[i] = [(pv * mi[j] - f * pr[j]) // prev if j > c else 0 for j in range(cols)]
            else:
                m[i] = [(pv * mi[j]) // prev if j > c else 0 for j in range(cols)]
        prev = pv
        r += 1
        if r == rows:
            break
    return r


def rref(a: Matrix, cols: int | None = None) -> tuple[Matrix, list[int]]:
    """Reduced row echelon form and the pivot columns."""
    m = [[Fraction(x) for x in row] for row in a]
    if not m:
        return m, []
    rows, ncols = len(m), len(m[0])
    pivots = []
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, rows) if m[i][c]), None)
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        pv = m[r][c]
        m[r] = [x / pv for x in m[r]]
        for i in range(rows):
            if i != r and m[i][c]:
                f = m[i][c]
                m[i] = [x - f * y for x, y in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
        if r == rows:
            break
    return m, pivots


def nullspace(a: Matrix, cols: int | None = None) -> Matrix:
    """Basis of ``{x : a x = 0}``, returned as a list of column vectors (rows)."""
    ncols = len(a[0]) if a else (cols or 0)
    if not a:
        return identity(ncols)
    red, pivots = rref(a)
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for f in free:
        v = [Fraction(0)] * ncols
        v[f] = Fraction(1)
        for r, pc in enumerate(pivots):
            v[pc] = -red[r][f]
        basis.append(v)
    return basis


def solve(a: Matrix, b: Sequence, cols: int | None = None):
    """One solution of ``a x = b`` or ``None`` if inconsistent."""
    ncols = len(a[0]) if a else (cols or 0)
    if not a:
        return [Fraction(0)] * ncols
    aug = [list(row) + [Fraction(y)] for row, y in zip(a, b)]
    red, pivots = rref(aug)
    if ncols in pivots:
        return None
    x = [Fraction(0)] * ncols
    for r, pc in enumerate(pivots):
        x[pc] = red[r][ncols]
    return x


def columns_to_matrix(vectors: Sequence[Sequence], length: int) -> Matrix:
    """Matrix whose columns are ``vectors`` (shape ``length x len(vectors)``)."""
    if not vectors:
        return [[] for _ in range(length)]
    return [[Fraction(v[i]) for v in vectors] for i in range(length)]
