"""Fitting ideals of module presentations.

Fitt_i(M) is generated by the (rank - i)-minors of the relation matrix;
it is independent of the chosen presentation, which the test suite checks
rather than assumes.
"""

from __future__ import annotations

from itertools import combinations

from .fpmodules import FPModule
from .ideals import Ideal
from .poly import Poly


def _det(matrix: list[list[Poly]], ring) -> Poly:
    n = len(matrix)
    if n == 0:
        return ring.one()
    if n == 1:
        return matrix[0][0]
    total = ring.zero()
    for j in range(n):
        entry = matrix[0][j]
        if entry.is_zero():
            continue
        minor = [[row[k] for k in range(n) if k != j] for row in matrix[1:]]
        term = entry * _det(minor, ring)
        total = total + term if j % 2 == 0 else total - term
    return total


def minors(rows: list[list[Poly]], size: int, ring) -> list[Poly]:
    nrows = len(rows)
    ncols = len(rows[0]) if rows else 0
    if size == 0:
        return [ring.one()]
    if size > nrows or size > ncols:
        return []
    out = []
    for ri in combinations(range(nrows), size):
        for ci in combinations(range(ncols), size):
            sub = [[rows[i][j] for j in ci] for i in ri]
            d = _det(sub, ring)
            if not d.is_zero():
                out.append(d)
    return out


def fitting_ideal(m: FPModule, i: int) -> Ideal:
    """Fitt_i(M) as an ideal of the base (ambient generators plus the base
    relations, so zero/unit tests happen inside the algebra)."""
    ring = m.base.ambient
    size = m.rank - i
    if size <= 0:
        return Ideal(ring, [ring.one()])
    rows = [[col.component(r) for col in m.relations] for r in range(m.rank)]
    gens = minors(rows, size, ring)
    return Ideal(ring, gens + list(m.base.relations.generators))


def fitting_ideals(m: FPModule) -> list[Ideal]:
    """Fitt_0 .. Fitt_rank; the last entry is always the unit ideal."""
    return [fitting_ideal(m, i) for i in range(m.rank + 1)]


def fitting_is_zero(m: FPModule, i: int) -> bool:
    """Fitt_i = 0 inside the base algebra (all minors lie in the relations)."""
    ideal = fitting_ideal(m, i)
    return all(m.base.relations.contains(g) for g in ideal.generators)


def fitting_is_unit(m: FPModule, i: int) -> bool:
    return fitting_ideal(m, i).contains_one()
