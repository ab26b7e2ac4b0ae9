"""The .crisp script language: declarations (ring, ideal, map, module,
prime, cover) and commands (check, certify, refute, descend, report).

Fixed grammar, single assignment per name, names declared before use,
precise line:column positions on every error.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Optional

_TOKEN_RE = re.compile(r"""
    (?P<ws>\s+|\#[^\n]*)
  | (?P<arrow><-|->)
  | (?P<int>\d+)
  | (?P<name>[A-Za-z_][A-Za-z_0-9]*)
  | (?P<string>"[^"\n]*")
  | (?P<sym>[=;:,(){}\[\]^*+\-/])
""", re.VERBOSE)


class ScriptError(ValueError):
    def __init__(self, message: str, line: int, col: int):
        super().__init__(f"{message} at {line}:{col}")
        self.message = message
        self.line = line
        self.col = col


class SyntaxErrorAt(ScriptError):
    pass


class UndefinedName(ScriptError):
    def __init__(self, name: str, line: int, col: int):
        ScriptError.__init__(self, f"undefined name {name!r}", line, col)
        self.name = name


class Redefinition(ScriptError):
    def __init__(self, name: str, line: int, col: int):
        ScriptError.__init__(self, f"name {name!r} is already defined", line, col)
        self.name = name


@dataclass
class Token:
    kind: str
    value: str
    line: int
    col: int


def tokenize(text: str) -> list[Token]:
    tokens: list[Token] = []
    line, col = 1, 1
    pos = 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if not m:
            raise SyntaxErrorAt(f"unexpected character {text[pos]!r}", line, col)
        raw = m.group(0)
        kind = m.lastgroup
        if kind != "ws":
            tokens.append(Token(kind, raw, line, col))
        newlines = raw.count("\n")
        if newlines:
            line += newlines
            col = len(raw) - raw.rfind("\n")
        else:
            col += len(raw)
        pos = m.end()
    tokens.append(Token("end", "", line, col))
    return tokens


# -- AST -------------------------------------------------------------------


@dataclass
class RingDecl:
    name: str
    line: int
    field_name: Optional[str] = None        # QQ / F<p> for base rings
    variables: Optional[list[str]] = None
    quotient_of: Optional[str] = None       # NAME / IDEAL form
    ideal_name: Optional[str] = None
    inline_ideal: Optional[list[str]] = None
    connected: bool = False                 # trailing assert_connected


@dataclass
class IdealDecl:
    name: str
    line: int
    ring: Optional[str]                     # None: the most recent ring
    polys: list[str] = field(default_factory=list)


@dataclass
class MapDecl:
    name: str
    line: int
    source: str
    target: str
    assignments: list[tuple[str, str]] = field(default_factory=list)


@dataclass
class ModuleDecl:
    name: str
    line: int
    ring: str
    rank: int
    cols: int
    rows: list[list[str]] = field(default_factory=list)


@dataclass
class PrimeDecl:
    name: str
    line: int
    ring: str
    polys: list[str] = field(default_factory=list)
    asserted: bool = True


@dataclass
class CoverDecl:
    name: str
    line: int
    ring: str
    pieces: list[str] = field(default_factory=list)
    zariski: Optional[list[str]] = None


@dataclass
class Command:
    verb: str                 # check_crisp, check_flat, check_equalizer,
    line: int                 # check_cover, certify_split, certify_ff,
    args: dict = field(default_factory=dict)   # refute, descend, report_json


Statement = object


@dataclass
class Script:
    statements: list
    source_text: str

    def declarations(self):
        return [s for s in self.statements if not isinstance(s, Command)]

    def commands(self):
        return [s for s in self.statements if isinstance(s, Command)]


class _Parser:
    def __init__(self, tokens: list[Token]):
        self.tokens = tokens
        self.i = 0
        self.defined: set[str] = set()

    def peek(self) -> Token:
        return self.tokens[self.i]

    def next(self) -> Token:
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def expect(self, value: str) -> Token:
        tok = self.next()
        if tok.value != value:
            raise SyntaxErrorAt(f"expected {value!r}, got {tok.value!r}",
                                tok.line, tok.col)
        return tok

    def expect_kind(self, kind: str) -> Token:
        tok = self.next()
        if tok.kind != kind:
            raise SyntaxErrorAt(f"expected {kind}, got {tok.value!r}",
                                tok.line, tok.col)
        return tok

    def fresh_name(self) -> Token:
        tok = self.expect_kind("name")
        if tok.value in self.defined:
            raise Redefinition(tok.value, tok.line, tok.col)
        self.defined.add(tok.value)
        return tok

    def used_name(self) -> Token:
        tok = self.expect_kind("name")
        if tok.value not in self.defined:
            raise UndefinedName(tok.value, tok.line, tok.col)
        return tok

    # -- expression slurping: everything up to a stop symbol at depth 0 ----

    def slurp_expr(self, stops: set[str]) -> str:
        parts = []
        depth = 0
        while True:
            tok = self.peek()
            if tok.kind == "end":
                raise SyntaxErrorAt("unterminated expression", tok.line, tok.col)
            if depth == 0 and tok.value in stops:
                break
            if tok.value in "([{":
                depth += 1
            elif tok.value in ")]}":
                if depth == 0:
                    break
                depth -= 1
            parts.append(self.next().value)
        if not parts:
            tok = self.peek()
            raise SyntaxErrorAt("empty expression", tok.line, tok.col)
        return " ".join(parts)

    def poly_list(self, open_sym: str = "(", close_sym: str = ")") -> list[str]:
        self.expect(open_sym)
        polys = []
        if self.peek().value != close_sym:
            while True:
                polys.append(self.slurp_expr({",", close_sym}))
                if self.peek().value == ",":
                    self.next()
                    continue
                break
        self.expect(close_sym)
        return polys

    # -- statements ---------------------------------------------------------

    def parse_script(self, text: str) -> Script:
        statements = []
        while self.peek().kind != "end":
            statements.append(self.parse_statement())
        return Script(statements, text)

    def parse_statement(self):
        tok = self.peek()
        if tok.value == "ring":
            return self.parse_ring()
        if tok.value == "ideal":
            return self.parse_ideal()
        if tok.value == "map":
            return self.parse_map()
        if tok.value == "module":
            return self.parse_module()
        if tok.value == "prime":
            return self.parse_prime()
        if tok.value == "cover":
            return self.parse_cover()
        if tok.value in ("check", "certify", "refute", "descend", "report"):
            return self.parse_command()
        raise SyntaxErrorAt(f"unexpected token {tok.value!r}", tok.line, tok.col)

    def parse_ring(self) -> RingDecl:
        start = self.expect("ring")
        name = self.fresh_name()
        self.expect("=")
        head = self.expect_kind("name")
        if self.peek().value == "[":
            field_name = head.value
            self.expect("[")
            variables = []
            if self.peek().value != "]":
                while True:
                    variables.append(self.expect_kind("name").value)
                    if self.peek().value == ",":
                        self.next()
                        continue
                    break
            self.expect("]")
            self.expect(";")
            return RingDecl(name.value, start.line, field_name=field_name,
                            variables=variables)
        if head.value not in self.defined:
            raise UndefinedName(head.value, head.line, head.col)
        self.expect("/")
        if self.peek().value == "(":
            inline = self.poly_list()
            connected = self._optional_connected()
            self.expect(";")
            return RingDecl(name.value, start.line, quotient_of=head.value,
                            inline_ideal=inline, connected=connected)
        ideal = self.used_name()
        connected = self._optional_connected()
        self.expect(";")
        return RingDecl(name.value, start.line, quotient_of=head.value,
                        ideal_name=ideal.value, connected=connected)

    def _optional_connected(self) -> bool:
        if self.peek().value == "assert_connected":
            self.next()
            return True
        return False

    def parse_ideal(self) -> IdealDecl:
        start = self.expect("ideal")
        name = self.fresh_name()
        ring = None
        if self.peek().value == "in":
            self.next()
            ring = self.used_name().value
        self.expect("=")
        polys = self.poly_list()
        self.expect(";")
        return IdealDecl(name.value, start.line, ring, polys)

    def parse_map(self) -> MapDecl:
        start = self.expect("map")
        name = self.fresh_name()
        self.expect(":")
        source = self.used_name()
        self.expect("->")
        target = self.used_name()
        self.expect("=")
        self.expect("[")
        assignments = []
        if self.peek().value != "]":
            while True:
                var = self.expect_kind("name").value
                self.expect("->")
                assignments.append((var, self.slurp_expr({",", "]"})))
                if self.peek().value == ",":
                    self.next()
                    continue
                break
        self.expect("]")
        self.expect(";")
        return MapDecl(name.value, start.line, source.value, target.value,
                       assignments)

    def parse_module(self) -> ModuleDecl:
        start = self.expect("module")
        name = self.fresh_name()
        self.expect("=")
        self.expect("coker")
        ring = self.used_name()
        self.expect("^")
        rank = int(self.expect_kind("int").value)
        self.expect("<-")
        ring2 = self.used_name()
        if ring2.value != ring.value:
            raise SyntaxErrorAt("cokernel presentation must stay in one algebra",
                                ring2.line, ring2.col)
        self.expect("^")
        cols = int(self.expect_kind("int").value)
        self.expect("[")
        rows = []
        if self.peek().value != "]":
            while True:
                rows.append(self.poly_list("[", "]"))
                if self.peek().value == ",":
                    self.next()
                    continue
                break
        self.expect("]")
        self.expect(";")
        decl = ModuleDecl(name.value, start.line, ring.value, rank, cols, rows)
        if len(rows) != rank or any(len(r) != cols for r in rows):
            raise SyntaxErrorAt(
                f"matrix shape {len(rows)}x{set(len(r) for r in rows) or {0}} "
                f"does not match {rank}x{cols}", start.line, start.col)
        return decl

    def parse_prime(self) -> PrimeDecl:
        start = self.expect("prime")
        name = self.fresh_name()
        self.expect("in")
        ring = self.used_name()
        self.expect("=")
        polys = self.poly_list()
        self.expect("assert_prime")
        self.expect(";")
        return PrimeDecl(name.value, start.line, ring.value, polys)

    def parse_cover(self) -> CoverDecl:
        start = self.expect("cover")
        name = self.fresh_name()
        self.expect("on")
        ring = self.used_name()
        self.expect("=")
        self.expect("{")
        pieces = []
        while True:
            pieces.append(self.used_name().value)
            if self.peek().value == ",":
                self.next()
                continue
            break
        self.expect("}")
        zariski = None
        if self.peek().value == "zariski":
            self.next()
            zariski = self.poly_list()
        self.expect(";")
        return CoverDecl(name.value, start.line, ring.value, pieces, zariski)

    def parse_budget(self) -> dict:
        budget = {}
        if self.peek().value == "budget":
            self.next()
            keys = {"rank", "degree", "candidates", "time_ms"}
            while self.peek().value in keys:
                key = self.next().value
                self.expect("=")
                budget[key] = int(self.expect_kind("int").value)
        return budget

    def parse_command(self) -> Command:
        tok = self.next()
        if tok.value == "check":
            what = self.expect_kind("name").value
            if what == "crisp":
                target = self.used_name().value
                budget = self.parse_budget()
                self.expect(";")
                return Command("check_crisp", tok.line,
                               {"map": target, "budget": budget})
            if what == "flat":
                target = self.used_name().value
                self.expect(";")
                return Command("check_flat", tok.line, {"map": target})
            if what == "equalizer":
                target = self.used_name().value
                module = self.used_name().value
                self.expect(";")
                return Command("check_equalizer", tok.line,
                               {"map": target, "module": module})
            if what == "cover":
                target = self.used_name().value
                budget = self.parse_budget()
                self.expect(";")
                return Command("check_cover", tok.line,
                               {"cover": target, "budget": budget})
            raise SyntaxErrorAt(f"unknown check {what!r}", tok.line, tok.col)
        if tok.value == "certify":
            what = self.expect_kind("name").value
            if what == "split":
                target = self.used_name().value
                via = None
                if self.peek().value == "via":
                    self.next()
                    via = self.used_name().value
                self.expect(";")
                return Command("certify_split", tok.line,
                               {"map": target, "via": via})
            if what == "ff":
                target = self.used_name().value
                mode = self.expect_kind("name").value
                if mode not in ("zariski", "freebasis"):
                    raise SyntaxErrorAt(f"unknown ff evidence {mode!r}",
                                        tok.line, tok.col)
                polys = self.poly_list()
                self.expect(";")
                return Command("certify_ff", tok.line,
                               {"map": target, "mode": mode, "elements": polys})
            raise SyntaxErrorAt(f"unknown certify {what!r}", tok.line, tok.col)
        if tok.value == "refute":
            target = self.used_name().value
            budget = self.parse_budget()
            self.expect(";")
            return Command("refute", tok.line, {"map": target, "budget": budget})
        if tok.value == "descend":
            prop = self.expect_kind("name").value
            target = self.used_name().value
            subject = self.used_name().value
            self.expect(";")
            return Command("descend", tok.line,
                           {"property": prop, "map": target, "subject": subject})
        if tok.value == "report":
            self.expect("json")
            path = self.expect_kind("string").value[1:-1]
            self.expect(";")
            return Command("report_json", tok.line, {"path": path})
        raise SyntaxErrorAt(f"unexpected command {tok.value!r}", tok.line, tok.col)


def parse_script(text: str) -> Script:
    return _Parser(tokenize(text)).parse_script(text)


def pretty_print(script: Script) -> str:
    """Canonical re-rendering; parse(pretty_print(parse(s))) is identical."""
    out = []
    for st in script.statements:
        out.append(_render(st))
    return "\n".join(out) + "\n"


def _render(st) -> str:
    if isinstance(st, RingDecl):
        if st.quotient_of is None:
            return f"ring {st.name} = {st.field_name}[{','.join(st.variables)}] ;"
        conn = " assert_connected" if st.connected else ""
        if st.ideal_name:
            return f"ring {st.name} = {st.quotient_of} / {st.ideal_name}{conn} ;"
        return (f"ring {st.name} = {st.quotient_of} / "
                f"({', '.join(st.inline_ideal)}){conn} ;")
    if isinstance(st, IdealDecl):
        where = f" in {st.ring}" if st.ring else ""
        return f"ideal {st.name}{where} = ({', '.join(st.polys)}) ;"
    if isinstance(st, MapDecl):
        inner = ", ".join(f"{v} -> {e}" for v, e in st.assignments)
        return f"map {st.name} : {st.source} -> {st.target} = [{inner}] ;"
    if isinstance(st, ModuleDecl):
        rows = ",".join("[" + ", ".join(r) + "]" for r in st.rows)
        return (f"module {st.name} = coker {st.ring}^{st.rank} <- "
                f"{st.ring}^{st.cols} [{rows}] ;")
    if isinstance(st, PrimeDecl):
        return f"prime {st.name} in {st.ring} = ({', '.join(st.polys)}) assert_prime ;"
    if isinstance(st, CoverDecl):
        z = f" zariski ({', '.join(st.zariski)})" if st.zariski else ""
        return f"cover {st.name} on {st.ring} = {{{', '.join(st.pieces)}}}{z} ;"
    if isinstance(st, Command):
        return _render_command(st)
    raise TypeError(f"unknown statement {st!r}")


def _render_command(cmd: Command) -> str:
    budget = ""
    if cmd.args.get("budget"):
        budget = " budget " + " ".join(f"{k}={v}" for k, v in
                                       sorted(cmd.args["budget"].items()))
    if cmd.verb == "check_crisp":
        return f"check crisp {cmd.args['map']}{budget} ;"
    if cmd.verb == "check_flat":
        return f"check flat {cmd.args['map']} ;"
    if cmd.verb == "check_equalizer":
        return f"check equalizer {cmd.args['map']} {cmd.args['module']} ;"
    if cmd.verb == "check_cover":
        return f"check cover {cmd.args['cover']}{budget} ;"
    if cmd.verb == "certify_split":
        via = f" via {cmd.args['via']}" if cmd.args.get("via") else ""
        return f"certify split {cmd.args['map']}{via} ;"
    if cmd.verb == "certify_ff":
        return (f"certify ff {cmd.args['map']} {cmd.args['mode']} "
                f"({', '.join(cmd.args['elements'])}) ;")
    if cmd.verb == "refute":
        return f"refute {cmd.args['map']}{budget} ;"
    if cmd.verb == "descend":
        return f"descend {cmd.args['property']} {cmd.args['map']} {cmd.args['subject']} ;"
    if cmd.verb == "report_json":
        return f'report json "{cmd.args["path"]}" ;'
    raise TypeError(f"unknown command {cmd.verb}")
