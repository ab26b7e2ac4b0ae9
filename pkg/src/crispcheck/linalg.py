"""Exact Gaussian elimination over a coefficient field (fractions or F_p).

Matrices are lists of rows.  Used for the finite-dimensional decision
procedures, the brute-force oracle and degree-truncated equalizer checks.
"""

from __future__ import annotations

from .fields import Field


def rref(rows: list[list], field: Field) -> tuple[list[list], list[int]]:
    """Reduced row echelon form plus pivot column indices."""
    m = [list(r) for r in rows]
    if not m:
        return m, []
    ncols = len(m[0])
    zero = field.zero()
    pivots = []
    r = 0
    for c in range(ncols):
        pivot = None
        for i in range(r, len(m)):
            if m[i][c] != zero:
                pivot = i
                break
        if pivot is None:
            continue
        m[r], m[pivot] = m[pivot], m[r]
        inv = field.inv(m[r][c])
        m[r] = [field.mul(inv, v) for v in m[r]]
        for i in range(len(m)):
            if i != r and m[i][c] != zero:
                factor = m[i][c]
                m[i] = [field.sub(v, field.mul(factor, w)) for v, w in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
        if r == len(m):
            break
    return m, pivots


def rank(rows: list[list], field: Field) -> int:
    return len(rref(rows, field)[1])


def solve(rows: list[list], rhs: list, field: Field) -> list | None:
    """One solution of A x = b, or None if inconsistent."""
    if not rows:
        return []
    ncols = len(rows[0])
    aug = [list(r) + [b] for r, b in zip(rows, rhs)]
    red, pivots = rref(aug, field)
    zero = field.zero()
    for row in red:
        if all(v == zero for v in row[:ncols]) and row[ncols] != zero:
            return None
    x = [zero] * ncols
    for i, c in enumerate(pivots):
        if c == ncols:
            return None
        x[c] = red[i][ncols]
    return x


def nullspace(rows: list[list], ncols: int, field: Field) -> list[list]:
    """Basis of {x : A x = 0}."""
    red, pivots = rref(rows, field)
    zero, one = field.zero(), field.one()
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for f in free:
        x = [zero] * ncols
        x[f] = one
        for i, c in enumerate(pivots):
            x[c] = field.neg(red[i][f])
        basis.append(x)
    return basis


def mat_vec(rows: list[list], x: list, field: Field) -> list:
    out = []
    for r in rows:
        total = field.zero()
        for a, b in zip(r, x):
            total = field.add(total, field.mul(a, b))
        out.append(total)
    return out


def mat_mul(a: list[list], b: list[list], field: Field) -> list[list]:
    if not a or not b:
        return []
    n, k, m = len(a), len(b), len(b[0])
    zero = field.zero()
    out = [[zero] * m for _ in range(n)]
    for i in range(n):
        for t in range(k):
            v = a[i][t]
            if v == zero:
                continue
            row_b = b[t]
            row_o = out[i]
            for j in range(m):
                row_o[j] = field.add(row_o[j], field.mul(v, row_b[j]))
    return out


def identity_matrix(n: int, field: Field) -> list[list]:
    zero, one = field.zero(), field.one()
    return [[one if i == j else zero for j in range(n)] for i in range(n)]
