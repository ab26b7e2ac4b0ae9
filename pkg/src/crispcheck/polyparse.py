"""Tiny recursive-descent parser for polynomial expressions.

Grammar: sums/differences of products of powers of variables, integer
constants, and parenthesised subexpressions, e.g. ``(x-1)*(x-2) + 3*y^2``.
Used by the script language and by tests.
"""

from __future__ import annotations

import re

from .poly import Poly, PolyRing

_TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z_][A-Za-z_0-9']*)|(\^|\*|\+|\-|\(|\)))")


class PolyParseError(ValueError):
    def __init__(self, message: str, pos: int):
        super().__init__(f"{message} (at offset {pos})")
        self.pos = pos


class UndefinedVariable(PolyParseError):
    def __init__(self, name: str, pos: int):
        PolyParseError.__init__(self, f"undefined variable {name!r}", pos)
        self.name = name


def tokenize(text: str):
    pos = 0
    tokens = []
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            if text[pos:].strip():
                raise PolyParseError(f"unexpected character {text[pos]!r}", pos)
            break
        num, name, op = m.groups()
        if num is not None:
            tokens.append(("int", int(num), m.start()))
        elif name is not None:
            tokens.append(("name", name, m.start()))
        else:
            tokens.append((op, op, m.start()))
        pos = m.end()
    tokens.append(("end", None, len(text)))
    return tokens


class _Parser:
    def __init__(self, ring: PolyRing, tokens):
        self.ring = ring
        self.tokens = tokens
        self.i = 0

    def peek(self):
        return self.tokens[self.i]

    def next(self):
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def expect(self, kind):
        tok = self.next()
        if tok[0] != kind:
            raise PolyParseError(f"expected {kind!r}, got {tok[1]!r}", tok[2])
        return tok

    def parse_sum(self) -> Poly:
        sign = 1
        while self.peek()[0] in ("+", "-"):
            if self.next()[0] == "-":
                sign = -sign
        result = self.parse_product().scale(sign)
        while self.peek()[0] in ("+", "-"):
            op = self.next()[0]
            term = self.parse_product()
            result = result + term if op == "+" else result - term
        return result

    def parse_product(self) -> Poly:
        result = self.parse_power()
        while self.peek()[0] == "*":
            self.next()
            result = result * self.parse_power()
        return result

    def parse_power(self) -> Poly:
        base = self.parse_atom()
        if self.peek()[0] == "^":
            self.next()
            tok = self.expect("int")
            return base ** tok[1]
        return base

    def parse_atom(self) -> Poly:
        kind, value, pos = self.next()
        if kind == "int":
            return self.ring.const(value)
        if kind == "name":
            if value not in self.ring._var_index:
                raise UndefinedVariable(value, pos)
            return self.ring.var(value)
        if kind == "(":
            inner = self.parse_sum()
            self.expect(")")
            return inner
        if kind == "-":
            return -self.parse_atom()
        raise PolyParseError(f"unexpected token {value!r}", pos)


def parse_poly(ring: PolyRing, text: str) -> Poly:
    parser = _Parser(ring, tokenize(text))
    result = parser.parse_sum()
    tok = parser.peek()
    if tok[0] != "end":
        raise PolyParseError(f"trailing input {tok[1]!r}", tok[2])
    return result
