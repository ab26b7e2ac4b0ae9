"""Kähler differentials of a ring map.

Ω_{B/A} is presented on the symbols d(y_j) for the target generators, with
one Jacobian column per target relation and one per image of a source
generator (d of anything from A vanishes).
"""

from __future__ import annotations

from .algebras import RingMap
from .fpmodules import FPModule
from .vectors import Vec


def kaehler_differentials(phi: RingMap) -> FPModule:
    b = phi.target
    ring = b.ambient
    n = ring.nvars
    cols = []
    for g in b.relations.generators:
        comps = [g.derivative(j) for j in range(n)]
        vec = Vec.from_polys(comps, n) if n else Vec.zero(ring, 0)
        if not vec.is_zero():
            cols.append(vec)
    for image in phi.images:
        comps = [image.derivative(j) for j in range(n)]
        vec = Vec.from_polys(comps, n) if n else Vec.zero(ring, 0)
        if not vec.is_zero():
            cols.append(vec)
    return FPModule(b, n, cols)


def is_unramified(phi: RingMap) -> bool:
    """Unramified ⇔ Ω_{B/A} = 0 (finite presentation is built in)."""
    return kaehler_differentials(phi).is_zero_module()
