"""Monomial orders on polynomial rings and on free modules.

An order exposes a `key(exp)` function mapping an exponent tuple to a
sortable tuple, with bigger key meaning bigger monomial.  All orders here
are well-orders refining divisibility.  Module orders do the same for
(position, exponent) pairs.
"""

from __future__ import annotations

from typing import Sequence


class MonomialOrder:
    tag: str

    def key(self, exp: tuple) -> tuple:
        raise NotImplementedError

    def __repr__(self):
        return self.tag

    def __eq__(self, other):
        return isinstance(other, MonomialOrder) and self.tag == other.tag

    def __hash__(self):
        return hash(self.tag)


class Lex(MonomialOrder):
    tag = "lex"

    def key(self, exp):
        return exp


class GrevLex(MonomialOrder):
    """Graded reverse lexicographic: total degree first, ties broken by the
    smallest last nonzero difference."""

    tag = "grevlex"

    def key(self, exp):
        total = 0
        for e in exp:
            total += e
        return (total, tuple(-e for e in reversed(exp)))


class BlockOrder(MonomialOrder):
    """Eliminates the first `n_first` variables: any monomial involving them
    beats any monomial in the remaining block."""

    def __init__(self, n_first: int, first: MonomialOrder | None = None,
                 rest: MonomialOrder | None = None):
        self.n_first = n_first
        self.first = first or GREVLEX
        self.rest = rest or GREVLEX
        self.tag = f"block({n_first};{self.first.tag},{self.rest.tag})"

    def key(self, exp):
        return (self.first.key(exp[:self.n_first]), self.rest.key(exp[self.n_first:]))


LEX = Lex()
GREVLEX = GrevLex()


def order_from_tag(tag: str) -> MonomialOrder:
    if tag == "lex":
        return LEX
    if tag == "grevlex":
        return GREVLEX
    if tag.startswith("block("):
        inner = tag[len("block("):-1]
        n, names = inner.split(";")
        first, rest = names.split(",")
        return BlockOrder(int(n), order_from_tag(first), order_from_tag(rest))
    raise ValueError(f"unknown order tag {tag!r}")


class ModuleOrder:
    """Order on module monomials (position, exponent)."""

    tag: str

    def key(self, pos: int, exp: tuple) -> tuple:
        raise NotImplementedError

    def __eq__(self, other):
        return isinstance(other, ModuleOrder) and self.tag == other.tag

    def __hash__(self):
        return hash(self.tag)


class PositionOver(ModuleOrder):
    """Position-over-term: smaller positions dominate, ties broken by the
    ring order.  With generators listed first this is an elimination order
    for the leading block of positions."""

    def __init__(self, ring_order: MonomialOrder):
        self.ring_order = ring_order
        self.tag = f"POT[{ring_order.tag}]"

    def key(self, pos, exp):
        return (-pos, self.ring_order.key(exp))


class EliminationModuleOrder(ModuleOrder):
    """Eliminates the first `n_elim` ring variables across all positions:
    compares the eliminated part of the exponent first, then position, then
    the remaining variables.  Terms free of the eliminated variables are
    smaller than any term involving them, in every position."""

    def __init__(self, n_elim: int, inner: MonomialOrder | None = None):
        self.n_elim = n_elim
        self.inner = inner or GREVLEX
        self.tag = f"elim({n_elim})[{self.inner.tag}]"

    def key(self, pos, exp):
        head, tail = exp[:self.n_elim], exp[self.n_elim:]
        return (self.inner.key(head), -pos, self.inner.key(tail))


def exp_mul(a: tuple, b: tuple) -> tuple:
    return tuple(x + y for x, y in zip(a, b))


def exp_divides(a: tuple, b: tuple) -> bool:
    """True when monomial a divides monomial b."""
    for x, y in zip(a, b):
        if x > y:
            return False
    return True


def exp_div(a: tuple, b: tuple) -> tuple:
    """Quotient a / b of exponent vectors (caller guarantees divisibility)."""
    return tuple(x - y for x, y in zip(a, b))


def exp_lcm(a: tuple, b: tuple) -> tuple:
    return tuple(max(x, y) for x, y in zip(a, b))


def exp_degree(a: Sequence[int]) -> int:
    total = 0
    for e in a:
        total += e
    return total
