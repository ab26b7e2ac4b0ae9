"""Sparse multivariate polynomials over an exact field.

A polynomial is a dict from exponent tuples to nonzero coefficients; the
ring fixes the variable names and the default monomial order.  Values are
immutable by convention: no method mutates `terms` after construction.
"""

from __future__ import annotations

from typing import Iterable, Mapping

from .fields import Field, QQ
from .orders import GREVLEX, MonomialOrder, exp_degree, exp_mul


class RingMismatch(ValueError):
    pass


class PolyRing:
    """k[x_1, ..., x_n] with a fixed monomial order."""

    def __init__(self, field: Field, variables: Iterable[str],
                 order: MonomialOrder = GREVLEX):
        self.field = field
        self.variables = tuple(variables)
        if len(set(self.variables)) != len(self.variables):
            raise ValueError("variable names must be distinct")
        self.order = order
        self.nvars = len(self.variables)
        self._var_index = {v: i for i, v in enumerate(self.variables)}

    def __repr__(self):
        return f"{self.field}[{','.join(self.variables)}]"

    def __eq__(self, other):
        return (isinstance(other, PolyRing) and self.field is other.field
                and self.variables == other.variables and self.order == other.order)

    def __hash__(self):
        return hash((id(self.field), self.variables, self.order))

    # -- constructors -------------------------------------------------

    def zero(self) -> "Poly":
        return Poly(self, {})

    def one(self) -> "Poly":
        return Poly(self, {(0,) * self.nvars: self.field.one()})

    def const(self, c) -> "Poly":
        if isinstance(c, int):
            c = self.field.from_int(c)
        if c == self.field.zero():
            return self.zero()
        return Poly(self, {(0,) * self.nvars: c})

    def var(self, name: str) -> "Poly":
        i = self._var_index[name]
        exp = tuple(1 if j == i else 0 for j in range(self.nvars))
        return Poly(self, {exp: self.field.one()})

    def gens(self) -> list["Poly"]:
        return [self.var(v) for v in self.variables]

    def monomial(self, exp: tuple, coeff=None) -> "Poly":
        c = self.field.one() if coeff is None else coeff
        if isinstance(c, int):
            c = self.field.from_int(c)
        if c == self.field.zero():
            return self.zero()
        return Poly(self, {tuple(exp): c})

    def from_terms(self, terms: Mapping[tuple, object]) -> "Poly":
        zero = self.field.zero()
        clean = {}
        for exp, c in terms.items():
            if isinstance(c, int):
                c = self.field.from_int(c)
            if c != zero:
                clean[tuple(exp)] = c
        return Poly(self, clean)

    def poly(self, text: str) -> "Poly":
        """Parse an expression like ``x^2*y - 3*x + 1`` in this ring."""
        from .polyparse import parse_poly
        return parse_poly(self, text)

    def with_order(self, order: MonomialOrder) -> "PolyRing":
        if order == self.order:
            return self
        return PolyRing(self.field, self.variables, order)


class Poly:
    __slots__ = ("ring", "terms")

    def __init__(self, ring: PolyRing, terms: dict):
        self.ring = ring
        self.terms = terms

    # -- predicates ----------------------------------------------------

    def is_zero(self) -> bool:
        return not self.terms

    def is_one(self) -> bool:
        if len(self.terms) != 1:
            return False
        exp, c = next(iter(self.terms.items()))
        return exp_degree(exp) == 0 and c == self.ring.field.one()

    def is_constant(self) -> bool:
        return all(exp_degree(e) == 0 for e in self.terms)

    def total_degree(self) -> int:
        if not self.terms:
            return -1
        return max(exp_degree(e) for e in self.terms)

    # -- arithmetic ----------------------------------------------------

    def _check(self, other: "Poly"):
        if self.ring != other.ring:
            raise RingMismatch(f"{self.ring} vs {other.ring}")

    def __add__(self, other):
        if isinstance(other, int):
            other = self.ring.const(other)
        self._check(other)
        field = self.ring.field
        zero = field.zero()
        out = dict(self.terms)
        for exp, c in other.terms.items():
            s = field.add(out.get(exp, zero), c)
            if s == zero:
                out.pop(exp, None)
            else:
                out[exp] = s
        return Poly(self.ring, out)

    def __radd__(self, other):
        return self.__add__(other)

    def __neg__(self):
        neg = self.ring.field.neg
        return Poly(self.ring, {e: neg(c) for e, c in self.terms.items()})

    def __sub__(self, other):
        if isinstance(other, int):
            other = self.ring.const(other)
        return self.__add__(-other)

    def __rsub__(self, other):
        return (-self).__add__(other)

    def __mul__(self, other):
        if isinstance(other, int):
            other = self.ring.const(other)
        if not isinstance(other, Poly):
            return NotImplemented
        self._check(other)
        field = self.ring.field
        zero = field.zero()
        out: dict = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                exp = exp_mul(e1, e2)
                s = field.add(out.get(exp, zero), field.mul(c1, c2))
                if s == zero:
                    out.pop(exp, None)
                else:
                    out[exp] = s
        return Poly(self.ring, out)

    def __rmul__(self, other):
        return self.__mul__(other)

    def __pow__(self, n: int):
        if n < 0:
            raise ValueError("negative power")
        result = self.ring.one()
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def scale(self, c) -> "Poly":
        field = self.ring.field
        if isinstance(c, int):
            c = field.from_int(c)
        if c == field.zero():
            return self.ring.zero()
        return Poly(self.ring, {e: field.mul(c, v) for e, v in self.terms.items()})

    def __eq__(self, other):
        if isinstance(other, int):
            other = self.ring.const(other)
        if not isinstance(other, Poly):
            return NotImplemented
        return self.ring == other.ring and self.terms == other.terms

    def __hash__(self):
        return hash((self.ring, frozenset(self.terms.items())))

    # -- structure -----------------------------------------------------

    def lead(self, order: MonomialOrder | None = None) -> tuple:
        """(exponent, coefficient) of the leading term."""
        if not self.terms:
            raise ValueError("zero polynomial has no leading term")
        order = order or self.ring.order
        exp = max(self.terms, key=order.key)
        return exp, self.terms[exp]

    def sorted_terms(self, order: MonomialOrder | None = None) -> list:
        order = order or self.ring.order
        return sorted(self.terms.items(), key=lambda t: order.key(t[0]), reverse=True)

    def coefficient(self, exp: tuple):
        return self.terms.get(tuple(exp), self.ring.field.zero())

    def derivative(self, var: str | int) -> "Poly":
        i = var if isinstance(var, int) else self.ring._var_index[var]
        field = self.ring.field
        out: dict = {}
        for exp, c in self.terms.items():
            if exp[i] == 0:
                continue
            new = list(exp)
            new[i] -= 1
            coeff = field.mul(c, field.from_int(exp[i]))
            if coeff != field.zero():
                out[tuple(new)] = coeff
        return Poly(self.ring, out)

    def substitute(self, target: PolyRing, images: list["Poly"]) -> "Poly":
        """Evaluate at `images`, one per variable of this ring."""
        if len(images) != self.ring.nvars:
            raise ValueError("one image per variable required")
        if self.ring.field is not target.field:
            raise RingMismatch("substitution across different fields")
        powers: list[dict[int, Poly]] = [{0: target.one()} for _ in images]

        def power(i: int, e: int) -> "Poly":
            cache = powers[i]
            if e not in cache:
                top = max(cache)
                p = cache[top]
                while top < e:
                    p = p * images[i]
                    top += 1
                    cache[top] = p
            return cache[e]

        result = target.zero()
        for exp, c in sorted(self.terms.items()):
            term = target.const(c)
            for i, e in enumerate(exp):
                if e:
                    term = term * power(i, e)
            result = result + term
        return result

    def rename_into(self, target: PolyRing, var_map: dict[str, str] | None = None) -> "Poly":
        """Reinterpret in `target`, matching variables by (mapped) name.
        Source variables absent from the target are fine as long as they do
        not actually occur."""
        var_map = var_map or {}
        idx: list[int | None] = []
        for v in self.ring.variables:
            idx.append(target._var_index.get(var_map.get(v, v)))
        out = {}
        for exp, c in self.terms.items():
            new = [0] * target.nvars
            for i, e in enumerate(exp):
                if e == 0:
                    continue
                if idx[i] is None:
                    raise RingMismatch(
                        f"variable {self.ring.variables[i]!r} does not exist in {target}")
                new[idx[i]] = e
            out[tuple(new)] = c
        return Poly(target, out)

    # -- display -------------------------------------------------------

    def __str__(self):
        if not self.terms:
            return "0"
        field = self.ring.field
        parts = []
        for exp, c in self.sorted_terms():
            factors = []
            for v, e in zip(self.ring.variables, exp):
                if e == 1:
                    factors.append(v)
                elif e > 1:
                    factors.append(f"{v}^{e}")
            mono = "*".join(factors)
            if not mono:
                parts.append(field.coeff_str(c))
            elif c == field.one():
                parts.append(mono)
            elif c == field.neg(field.one()):
                parts.append(f"-{mono}")
            else:
                parts.append(f"{field.coeff_str(c)}*{mono}")
        text = parts[0]
        for p in parts[1:]:
            text += f" - {p[1:]}" if p.startswith("-") else f" + {p}"
        return text

    def __repr__(self):
        return f"<{self} in {self.ring}>"
