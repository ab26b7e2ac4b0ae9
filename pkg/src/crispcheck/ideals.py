"""Ideals in polynomial rings: Gröbner bases, normal forms, elimination,
saturation.  The reduced basis is cached per monomial order."""

from __future__ import annotations

from .groebner import groebner_module, normal_form
from .orders import BlockOrder, GREVLEX, MonomialOrder, PositionOver
from .poly import Poly, PolyRing, RingMismatch
from .vectors import Vec


class Ideal:
    def __init__(self, ring: PolyRing, generators: list[Poly]):
        self.ring = ring
        gens = []
        for g in generators:
            if g.ring != ring:
                raise RingMismatch("generator outside the stated ring")
            if not g.is_zero():
                gens.append(g)
        self.generators = tuple(gens)
        self._gb_cache: dict[str, list[Poly]] = {}

    def __repr__(self):
        inner = ", ".join(str(g) for g in self.generators) or "0"
        return f"Ideal({inner})"

    # -- Gröbner machinery ---------------------------------------------

    def groebner(self, order: MonomialOrder | None = None) -> list[Poly]:
        """The reduced Gröbner basis (unique, so idempotent and independent
        of the generator order)."""
        order = order or self.ring.order
        cached = self._gb_cache.get(order.tag)
        if cached is None:
            morder = PositionOver(order)
            vecs = [Vec.from_poly(g) for g in self.generators]
            basis = groebner_module(vecs, morder, 1, self.ring)
            cached = [v.to_poly() for v in basis]
            self._gb_cache[order.tag] = cached
        return cached

    def reduce(self, f: Poly, order: MonomialOrder | None = None) -> Poly:
        """Unique normal form of f; zero iff f lies in the ideal."""
        if f.ring != self.ring:
            raise RingMismatch("polynomial outside the ideal's ring")
        order = order or self.ring.order
        basis = [Vec.from_poly(g) for g in self.groebner(order)]
        return normal_form(Vec.from_poly(f), basis, PositionOver(order)).to_poly()

    def contains(self, f: Poly) -> bool:
        return self.reduce(f).is_zero()

    def contains_one(self) -> bool:
        gb = self.groebner()
        return len(gb) == 1 and gb[0].is_one()

    def is_zero(self) -> bool:
        return not self.groebner()

    def __eq__(self, other):
        if not isinstance(other, Ideal):
            return NotImplemented
        return self.ring == other.ring and self.groebner() == other.groebner()

    def __hash__(self):
        return hash((self.ring, tuple(self.groebner())))

    def sum(self, other: "Ideal") -> "Ideal":
        if other.ring != self.ring:
            raise RingMismatch("ideals in different rings")
        return Ideal(self.ring, list(self.generators) + list(other.generators))

    def plus(self, polys: list[Poly]) -> "Ideal":
        return Ideal(self.ring, list(self.generators) + list(polys))


def reduce_poly(f: Poly, basis: list[Poly], order: MonomialOrder | None = None) -> Poly:
    """Normal form of f against an explicit Gröbner basis."""
    if not basis:
        return f
    order = order or f.ring.order
    vecs = [Vec.from_poly(g) for g in basis]
    return normal_form(Vec.from_poly(f), vecs, PositionOver(order)).to_poly()


def eliminate(ideal: Ideal, keep: list[str]) -> Ideal:
    """Contract the ideal to the subring on `keep`: generators of
    I ∩ k[keep], returned inside the original ring."""
    ring = ideal.ring
    keep_set = set(keep)
    for v in keep_set:
        if v not in ring._var_index:
            raise ValueError(f"unknown variable {v!r}")
    drop = [v for v in ring.variables if v not in keep_set]
    if not drop:
        return Ideal(ring, list(ideal.generators))
    reordered = PolyRing(ring.field, tuple(drop) + tuple(v for v in ring.variables
                                                         if v in keep_set),
                         BlockOrder(len(drop)))
    moved = [g.rename_into(reordered) for g in ideal.generators]
    gb = Ideal(reordered, moved).groebner(reordered.order)
    drop_idx = range(len(drop))
    kept = []
    for g in gb:
        if all(all(exp[i] == 0 for i in drop_idx) for exp in g.terms):
            kept.append(g.rename_into(ring))
    return Ideal(ring, kept)


def saturate(ideal: Ideal, f: Poly) -> Ideal:
    """(ideal : f^inf) via the auxiliary-inverse construction: adjoin t,
    add t*f - 1, and eliminate t."""
    ring = ideal.ring
    if f.ring != ring:
        raise RingMismatch("saturating element outside the ring")
    if f.is_zero():
        # g * 0 = 0 lies in the ideal for every g
        return Ideal(ring, [ring.one()])
    aux = "t"
    while aux in ring._var_index:
        aux += "_"
    big = PolyRing(ring.field, (aux,) + ring.variables, BlockOrder(1))
    moved = [g.rename_into(big) for g in ideal.generators]
    moved.append(big.var(aux) * f.rename_into(big) - big.one())
    gb = Ideal(big, moved).groebner(big.order)
    kept = [g.rename_into(ring) for g in gb
            if all(exp[0] == 0 for exp in g.terms)]
    return Ideal(ring, kept)
