"""Buchberger's algorithm for submodules of free modules (ideals = rank 1).

Pair selection uses the sugar strategy; the coprime-leading-monomial
criterion is applied in the ideal case and the chain criterion everywhere.
Outputs are reduced Gröbner bases, which are unique for a fixed order, so
every downstream computation is reproducible bit for bit.
"""

from __future__ import annotations

import heapq

from .orders import (ModuleOrder, exp_degree, exp_div, exp_divides, exp_lcm,
                     exp_mul)
from .vectors import Vec

__all__ = ["groebner_module", "normal_form", "normal_form_with_coeffs"]


def _prep(basis: list[Vec], morder: ModuleOrder):
    prepped = []
    for g in basis:
        if g.is_zero():
            continue
        (pos, exp), c = g.lead(morder)
        prepped.append((g, pos, exp, c))
    return prepped


def normal_form(v: Vec, basis: list[Vec], morder: ModuleOrder) -> Vec:
    """Unique full normal form of v modulo a Gröbner basis."""
    return _reduce(v, _prep(basis, morder), morder)[0]


def normal_form_with_coeffs(v: Vec, basis: list[Vec], morder: ModuleOrder):
    """Normal form plus quotients q with v = sum q_i * basis_i + nf."""
    prepped = _prep(basis, morder)
    nf, quotients = _reduce(v, prepped, morder, track=len(basis))
    # map back to the caller's indexing (zero vectors were dropped in _prep)
    out = [dict() for _ in basis]
    live = [i for i, g in enumerate(basis) if not g.is_zero()]
    for j, q in enumerate(quotients):
        out[live[j]] = q
    from .poly import Poly
    return nf, [Poly(v.ring, q) for q in out]


def _reduce(v: Vec, prepped, morder: ModuleOrder, track: int | None = None):
    field = v.ring.field
    zero = field.zero()
    work = dict(v.terms)
    remainder: dict = {}
    quotients = [dict() for _ in prepped] if track is not None else None
    while work:
        key = max(work, key=lambda k: morder.key(*k))
        pos, exp = key
        c = work[key]
        hit = None
        for idx, (g, gp, ge, gc) in enumerate(prepped):
            if gp == pos and exp_divides(ge, exp):
                hit = idx
                break
        if hit is None:
            del work[key]
            remainder[key] = c
            continue
        g, gp, ge, gc = prepped[hit]
        factor = exp_div(exp, ge)
        coeff = field.div(c, gc)
        if quotients is not None:
            q = quotients[hit]
            s = field.add(q.get(factor, zero), coeff)
            if s == zero:
                q.pop(factor, None)
            else:
                q[factor] = s
        for (p2, e2), c2 in g.terms.items():
            k2 = (p2, exp_mul(e2, factor))
            s = field.sub(work.get(k2, zero), field.mul(c2, coeff))
            if s == zero:
                work.pop(k2, None)
            else:
                work[k2] = s
    nf = Vec(v.ring, v.rank, remainder)
    return nf, quotients


def _spair(f, flead, g, glead, field):
    (pos, fe), fc = flead
    (_, ge), gc = glead
    lcm = exp_lcm(fe, ge)
    left = f.mul_term(exp_div(lcm, fe), field.inv(fc))
    right = g.mul_term(exp_div(lcm, ge), field.inv(gc))
    return left - right


def groebner_module(gens: list[Vec], morder: ModuleOrder, rank: int,
                    ring=None) -> list[Vec]:
    """Reduced Gröbner basis of the submodule generated by `gens`."""
    if ring is None:
        nonzero = [g for g in gens if not g.is_zero()]
        if not nonzero:
            return []
        ring = nonzero[0].ring
    field = ring.field
    basis: list[Vec] = []
    leads: list = []   # ((pos, exp), coeff)

    def monic(v: Vec) -> Vec:
        _, c = v.lead(morder)
        return v.scale(field.inv(c))

    start = sorted((g for g in gens if not g.is_zero()),
                   key=lambda g: morder.key(*g.lead(morder)[0]))
    pending: set[tuple[int, int]] = set()
    heap: list = []
    sugars: list[int] = []

    def add_element(v: Vec, sugar: int):
        v = monic(v)
        i = len(basis)
        basis.append(v)
        lead = v.lead(morder)
        leads.append(lead)
        sugars.append(sugar)
        (pos, exp), _ = lead
        for j in range(i):
            (jp, je), _ = leads[j]
            if jp != pos:
                continue
            lcm = exp_lcm(exp, je)
            s = max(sugar + exp_degree(exp_div(lcm, exp)),
                    sugars[j] + exp_degree(exp_div(lcm, je)))
            heapq.heappush(heap, (s, morder.key(pos, lcm), j, i))
            pending.add((j, i))

    for g in start:
        nf = normal_form(g, basis, morder)
        if not nf.is_zero():
            add_element(nf, nf.max_degree())

    while heap:
        s, _, i, j = heapq.heappop(heap)
        if (i, j) not in pending:
            continue
        pending.discard((i, j))
        (pi, ei), _ = leads[i]
        (pj, ej), _ = leads[j]
        lcm = exp_lcm(ei, ej)
        # coprime criterion: only valid in the ideal (rank 1) case
        if rank == 1 and all(a == 0 or b == 0 for a, b in zip(ei, ej)):
            continue
        # chain criterion
        skip = False
        for k in range(len(basis)):
            if k in (i, j):
                continue
            (pk, ek), _ = leads[k]
            if pk != pi or not exp_divides(ek, lcm):
                continue
            a, b = (min(i, k), max(i, k)), (min(j, k), max(j, k))
            if a not in pending and b not in pending:
                skip = True
                break
        if skip:
            continue
        sp = _spair(basis[i], leads[i], basis[j], leads[j], field)
        nf = normal_form(sp, basis, morder)
        if not nf.is_zero():
            add_element(nf, s)

    return _reduce_basis(basis, leads, morder, rank, ring)


def _reduce_basis(basis, leads, morder, rank, ring):
    # minimalise: drop elements whose lead is divisible by another lead
    keep = []
    for i, ((pi, ei), _) in enumerate(leads):
        redundant = False
        for j, ((pj, ej), _) in enumerate(leads):
            if i == j or pj != pi:
                continue
            if exp_divides(ej, ei) and (ej != ei or j < i):
                redundant = True
                break
        if not redundant:
            keep.append(i)
    minimal = [basis[i] for i in keep]
    # tail-reduce every element against the others
    reduced = []
    for i, g in enumerate(minimal):
        others = minimal[:i] + minimal[i + 1:]
        nf = normal_form(g, others, morder) if others else g
        if not nf.is_zero():
            _, c = nf.lead(morder)
            reduced.append(nf.scale(ring.field.inv(c)))
    reduced.sort(key=lambda g: morder.key(*g.lead(morder)[0]))
    return reduced
