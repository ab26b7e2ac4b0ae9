"""Elements of free modules R^r over a polynomial ring.

A vector is a sparse dict from (position, exponent) module monomials to
nonzero coefficients.  Rank-1 vectors double as polynomials for the ideal
case, so one Gröbner engine serves both.
"""

from __future__ import annotations

from .orders import ModuleOrder, exp_mul
from .poly import Poly, PolyRing, RingMismatch


class Vec:
    __slots__ = ("ring", "rank", "terms")

    def __init__(self, ring: PolyRing, rank: int, terms: dict):
        self.ring = ring
        self.rank = rank
        self.terms = terms

    @classmethod
    def from_polys(cls, polys: list[Poly], rank: int | None = None) -> "Vec":
        if not polys:
            raise ValueError("need at least one component")
        ring = polys[0].ring
        rank = len(polys) if rank is None else rank
        terms = {}
        for pos, p in enumerate(polys):
            if p.ring != ring:
                raise RingMismatch("components in different rings")
            for exp, c in p.terms.items():
                terms[(pos, exp)] = c
        return cls(ring, rank, terms)

    @classmethod
    def from_poly(cls, p: Poly) -> "Vec":
        return cls(p.ring, 1, {(0, exp): c for exp, c in p.terms.items()})

    @classmethod
    def zero(cls, ring: PolyRing, rank: int) -> "Vec":
        return cls(ring, rank, {})

    @classmethod
    def unit(cls, ring: PolyRing, rank: int, pos: int) -> "Vec":
        return cls(ring, rank, {(pos, (0,) * ring.nvars): ring.field.one()})

    def is_zero(self) -> bool:
        return not self.terms

    def component(self, pos: int) -> Poly:
        return Poly(self.ring, {exp: c for (p, exp), c in self.terms.items() if p == pos})

    def components(self) -> list[Poly]:
        polys = [dict() for _ in range(self.rank)]
        for (p, exp), c in self.terms.items():
            polys[p][exp] = c
        return [Poly(self.ring, t) for t in polys]

    def to_poly(self) -> Poly:
        if self.rank != 1:
            raise ValueError("not a rank-1 vector")
        return self.component(0)

    def __add__(self, other: "Vec") -> "Vec":
        field = self.ring.field
        zero = field.zero()
        out = dict(self.terms)
        for key, c in other.terms.items():
            s = field.add(out.get(key, zero), c)
            if s == zero:
                out.pop(key, None)
            else:
                out[key] = s
        return Vec(self.ring, self.rank, out)

    def __neg__(self) -> "Vec":
        neg = self.ring.field.neg
        return Vec(self.ring, self.rank, {k: neg(c) for k, c in self.terms.items()})

    def __sub__(self, other: "Vec") -> "Vec":
        return self.__add__(-other)

    def scale(self, c) -> "Vec":
        field = self.ring.field
        if isinstance(c, int):
            c = field.from_int(c)
        if c == field.zero():
            return Vec(self.ring, self.rank, {})
        return Vec(self.ring, self.rank, {k: field.mul(c, v) for k, v in self.terms.items()})

    def mul_term(self, exp: tuple, coeff) -> "Vec":
        """Multiply by the monomial coeff * x^exp."""
        field = self.ring.field
        if coeff == field.zero():
            return Vec(self.ring, self.rank, {})
        out = {}
        for (pos, e), c in self.terms.items():
            out[(pos, exp_mul(e, exp))] = field.mul(c, coeff)
        return Vec(self.ring, self.rank, out)

    def mul_poly(self, p: Poly) -> "Vec":
        result = Vec(self.ring, self.rank, {})
        for exp, c in p.terms.items():
            result = result + self.mul_term(exp, c)
        return result

    def lead(self, morder: ModuleOrder):
        """((position, exponent), coefficient) of the leading module term."""
        if not self.terms:
            raise ValueError("zero vector has no leading term")
        key = max(self.terms, key=lambda k: morder.key(*k))
        return key, self.terms[key]

    def embed(self, rank: int, offset: int) -> "Vec":
        """View inside R^rank with positions shifted by offset."""
        return Vec(self.ring, rank,
                   {(pos + offset, exp): c for (pos, exp), c in self.terms.items()})

    def slice_positions(self, start: int, stop: int) -> "Vec":
        """The sub-vector on positions [start, stop), re-based at 0."""
        return Vec(self.ring, stop - start,
                   {(pos - start, exp): c for (pos, exp), c in self.terms.items()
                    if start <= pos < stop})

    def max_degree(self) -> int:
        if not self.terms:
            return -1
        return max(sum(exp) for (_, exp) in self.terms)

    def __eq__(self, other):
        return (isinstance(other, Vec) and self.ring == other.ring
                and self.rank == other.rank and self.terms == other.terms)

    def __hash__(self):
        return hash((self.ring, self.rank, frozenset(self.terms.items())))

    def __str__(self):
        return "(" + ", ".join(str(p) for p in self.components()) + ")"

    def __repr__(self):
        return f"<vec {self} rank {self.rank}>"
