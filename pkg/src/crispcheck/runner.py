"""Execute parsed scripts: build the declared objects, run the commands in
order, and collect one report per command.

Engine errors inside a command are non-fatal to the batch; declaration
errors abort, since later statements cannot be trusted to mean anything.
Exit codes: 0 all commands completed (NotCrisp findings included), 1 parse
or engine error, 2 invariant VIOLATION detected.
"""

from __future__ import annotations

import json
import time
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional

from . import __version__
from .algebras import FPAlgebra, RingMap
from .criteria import check_equalizer_sequence
from .descent import algebra_flatness, descent_consistency, ScopeError
from .dsl import (Command, CoverDecl, IdealDecl, MapDecl, ModuleDecl,
                  PrimeDecl, RingDecl, Script, ScriptError, UndefinedName,
                  _render, parse_script)
from .engine import (HintRejected, NotARetraction, certify_faithfully_flat,
                     certify_polynomial_retraction, certify_split_retraction,
                     check_crisp, refute_crisp)
from .fields import field_from_name
from .fpmodules import FPModule, NotFiniteOverBase
from .ideals import Ideal
from .poly import PolyRing
from .polyparse import UndefinedVariable
from .primes import PrimePoint
from .reports import SCHEMA_VERSION, finalize, input_hash
from .scheme import AffineCover, check_crisp_cover
from .vectors import Vec
from .verdicts import DEFAULT_BUDGET, SearchBudget


_DESCEND_TAGS = {
    "fg": "FinitelyGenerated", "fp": "FinitelyPresented", "flat": "Flat",
    "projective": "Projective", "finite": "FiniteAlgebra",
    "finite_type": "FiniteTypeAlgebra",
    "finite_presentation": "FinitePresentationAlgebra", "integral": "Integral",
    "unramified": "Unramified", "etale": "Etale",
}


@dataclass
class RunConfig:
    budget: SearchBudget = DEFAULT_BUDGET
    threads: int = 1
    seed: int = 0
    output_dir: Optional[Path] = None


@dataclass
class Environment:
    rings: dict = field(default_factory=dict)
    ideals: dict = field(default_factory=dict)        # name -> (ring_name, Ideal)
    maps: dict = field(default_factory=dict)
    modules: dict = field(default_factory=dict)       # name -> (ring_name, FPModule)
    primes: dict = field(default_factory=dict)        # name -> (ring_name, PrimePoint)
    covers: dict = field(default_factory=dict)
    certificates: dict = field(default_factory=dict)  # map name -> Certificate
    last_ring: Optional[str] = None

    def primes_over(self, algebra: FPAlgebra) -> list[PrimePoint]:
        return [p for _, (rn, p) in sorted(self.primes.items())
                if p.base.same_presentation(algebra)]

    def modules_over(self, algebra: FPAlgebra) -> list[FPModule]:
        return [m for _, (rn, m) in sorted(self.modules.items())
                if m.base.same_presentation(algebra)]


@dataclass
class RunResult:
    reports: list
    exit_code: int
    document: dict


class CommandError(RuntimeError):
    pass


def run_text(text: str, config: RunConfig | None = None) -> RunResult:
    script = parse_script(text)
    return run_script(script, config, source_text=text)


def run_script(script: Script, config: RunConfig | None = None,
               source_text: str = "") -> RunResult:
    config = config or RunConfig()
    env = Environment()
    reports = []
    exit_code = 0
    for st in script.statements:
        if not isinstance(st, Command):
            _declare(env, st)
            continue
        started = time.monotonic()
        entry = {"index": len(reports), "command": _render(st), "status": "ok"}
        try:
            result = _execute(env, st, config, reports)
            entry["result"] = result
            if result.get("violation"):
                exit_code = max(exit_code, 2)
        except (CommandError, ScriptError, NotFiniteOverBase, NotARetraction,
                HintRejected, ScopeError, ValueError) as exc:
            entry["status"] = "error"
            entry["error"] = str(exc)
            exit_code = max(exit_code, 1)
        entry["timing_ms"] = round((time.monotonic() - started) * 1000.0, 3)
        reports.append(entry)
    document = finalize({
        "schema": SCHEMA_VERSION,
        "tool": "crispcheck",
        "version": __version__,
        "input_sha256": input_hash(source_text),
        "budget": config.budget.to_json(),
        "threads": config.threads,
        "seed": config.seed,
        "reports": reports,
    })
    return RunResult(reports, exit_code, document)


# -- declarations -------------------------------------------------------------


def _parse_poly(ring: PolyRing, text: str, line: int):
    try:
        return ring.poly(text)
    except UndefinedVariable as exc:
        raise UndefinedName(exc.name, line, 0) from exc


def _declare(env: Environment, st) -> None:
    if isinstance(st, RingDecl):
        if st.quotient_of is None:
            ring = PolyRing(field_from_name(st.field_name), st.variables)
            env.rings[st.name] = FPAlgebra(ring)
        else:
            base = env.rings[st.quotient_of]
            if st.ideal_name is not None:
                ring_name, ideal = env.ideals[st.ideal_name]
                if ring_name != st.quotient_of:
                    raise ScriptError("ideal lives in a different ring",
                                      st.line, 0)
                gens = list(ideal.generators)
            else:
                gens = [_parse_poly(base.ambient, p, st.line)
                        for p in st.inline_ideal]
            env.rings[st.name] = FPAlgebra(
                base.ambient, Ideal(base.ambient,
                                    gens + list(base.relations.generators)),
                connected=True if st.connected else None)
        env.last_ring = st.name
        return
    if isinstance(st, IdealDecl):
        ring_name = st.ring or env.last_ring
        if ring_name is None or ring_name not in env.rings:
            raise UndefinedName(str(ring_name), st.line, 0)
        base = env.rings[ring_name]
        gens = [_parse_poly(base.ambient, p, st.line) for p in st.polys]
        env.ideals[st.name] = (ring_name, Ideal(base.ambient, gens))
        return
    if isinstance(st, MapDecl):
        source = env.rings[st.source]
        target = env.rings[st.target]
        assigned = dict(st.assignments)
        images = []
        for v in source.ambient.variables:
            if v not in assigned:
                raise ScriptError(f"no image for generator {v!r}", st.line, 0)
            images.append(_parse_poly(target.ambient, assigned.pop(v), st.line))
        if assigned:
            raise ScriptError(f"images for unknown generators {sorted(assigned)}",
                              st.line, 0)
        env.maps[st.name] = RingMap(source, target, images)
        return
    if isinstance(st, ModuleDecl):
        base = env.rings[st.ring]
        ring = base.ambient
        rows = [[_parse_poly(ring, entry, st.line) for entry in row]
                for row in st.rows]
        cols = []
        for j in range(st.cols):
            cols.append(Vec.from_polys([rows[i][j] for i in range(st.rank)],
                                       st.rank))
        env.modules[st.name] = (st.ring, FPModule(base, st.rank, cols))
        return
    if isinstance(st, PrimeDecl):
        base = env.rings[st.ring]
        gens = [_parse_poly(base.ambient, p, st.line) for p in st.polys]
        env.primes[st.name] = (st.ring, PrimePoint(base, gens, name=st.name))
        return
    if isinstance(st, CoverDecl):
        base = env.rings[st.ring]
        pieces = []
        piece_names = []
        for piece in st.pieces:
            if piece in env.maps:
                m = env.maps[piece]
            elif piece in env.rings:
                m = _unique_map_to(env, base, piece, st.line)
            else:
                raise UndefinedName(piece, st.line, 0)
            if not m.source.same_presentation(base):
                raise ScriptError(f"piece {piece!r} does not start at {st.ring}",
                                  st.line, 0)
            pieces.append(m)
            piece_names.append(piece)
        hint = None
        if st.zariski is not None:
            hint = [_parse_poly(base.ambient, p, st.line) for p in st.zariski]
        cover = AffineCover(base, pieces, zariski_hint=hint, name=st.name)
        env.covers[st.name] = (cover, piece_names)
        return
    raise TypeError(f"unknown declaration {st!r}")


def _unique_map_to(env: Environment, base: FPAlgebra, ring_name: str, line: int):
    hits = [m for name, m in sorted(env.maps.items())
            if m.source.same_presentation(base)
            and m.target is env.rings[ring_name]]
    if len(hits) != 1:
        raise ScriptError(
            f"{len(hits)} declared maps into {ring_name!r}; name the map instead",
            line, 0)
    return hits[0]


# -- commands ------------------------------------------------------------------


def _budget_for(cmd: Command, config: RunConfig) -> SearchBudget:
    inline = cmd.args.get("budget") or {}
    if not inline:
        return config.budget
    base = config.budget
    return SearchBudget(
        max_rank=inline.get("rank", base.max_rank),
        max_degree=inline.get("degree", base.max_degree),
        max_candidates=inline.get("candidates", base.max_candidates),
        time_limit_ms=inline.get("time_ms", base.time_limit_ms))


def _execute(env: Environment, cmd: Command, config: RunConfig,
             reports: list) -> dict:
    if cmd.verb == "check_crisp":
        name = cmd.args["map"]
        phi = env.maps[name]
        budget = _budget_for(cmd, config)
        stored = env.certificates.get(name)
        if stored is not None:
            from .engine import verify_certificate
            ok, _ = verify_certificate(stored)
            if ok:
                from .verdicts import CrispVerdict
                verdict = CrispVerdict.crisp(stored)
                return {"kind": "crisp_verdict", **verdict.to_json(),
                        "budget": budget.to_json(), "from_registry": True}
        verdict = check_crisp(phi, budget,
                              primes=env.primes_over(phi.source),
                              modules=env.modules_over(phi.source),
                              threads=config.threads)
        if verdict.kind == "Crisp":
            env.certificates.setdefault(name, verdict.certificate)
        return {"kind": "crisp_verdict", **verdict.to_json(),
                "budget": budget.to_json()}
    if cmd.verb == "refute":
        phi = env.maps[cmd.args["map"]]
        budget = _budget_for(cmd, config)
        witness, search = refute_crisp(phi, budget,
                                       primes=env.primes_over(phi.source),
                                       modules=env.modules_over(phi.source),
                                       threads=config.threads)
        if witness is None:
            return {"kind": "refutation", "found": False, "search": search,
                    "budget": budget.to_json()}
        return {"kind": "refutation", "found": True,
                "witness": witness.to_json(), "search": search,
                "budget": budget.to_json()}
    if cmd.verb == "certify_split":
        phi = env.maps[cmd.args["map"]]
        if cmd.args.get("via"):
            psi = env.maps[cmd.args["via"]]
            cert = certify_polynomial_retraction(phi, psi)
        else:
            cert = certify_split_retraction(phi)
            if cert is None:
                return {"kind": "certificate", "found": False,
                        "note": "no retraction found (NotFound is not NotCrisp)"}
        env.certificates.setdefault(cmd.args["map"], cert)
        return {"kind": "certificate", "found": True,
                "certificate": cert.to_json()}
    if cmd.verb == "certify_ff":
        phi = env.maps[cmd.args["map"]]
        elements = [_parse_poly(phi.source.ambient, p, cmd.line)
                    for p in cmd.args["elements"]]
        if cmd.args["mode"] == "zariski":
            cert = certify_faithfully_flat(phi, zariski=elements)
        else:
            targets = [_parse_poly(phi.target.ambient, p, cmd.line)
                       for p in cmd.args["elements"]]
            cert = certify_faithfully_flat(phi, free_basis=targets)
        env.certificates.setdefault(cmd.args["map"], cert)
        return {"kind": "certificate", "found": True,
                "certificate": cert.to_json()}
    if cmd.verb == "check_flat":
        phi = env.maps[cmd.args["map"]]
        result = algebra_flatness(phi)
        return {"kind": "flatness", "result": result.kind,
                "rank": result.rank,
                "obstruction_index": result.obstruction_index,
                "obstruction": result.obstruction}
    if cmd.verb == "check_equalizer":
        target = cmd.args["map"]
        if target in env.maps:
            phi = env.maps[target]
        elif target in env.covers:
            phi = env.covers[target][0].product_map
        else:
            raise CommandError(f"{target!r} is neither a map nor a cover")
        _, module = env.modules[cmd.args["module"]]
        result = check_equalizer_sequence(phi, module)
        out = {"kind": "equalizer", "result": result.kind, "mode": result.mode,
               "note": result.note}
        if result.element is not None:
            out["element"] = [str(p) for p in result.element.components()]
        return out
    if cmd.verb == "check_cover":
        cover, piece_names = env.covers[cmd.args["cover"]]
        budget = _budget_for(cmd, config)
        piece_certs = {}
        for i, name in enumerate(piece_names):
            if name in env.certificates:
                piece_certs[i] = env.certificates[name]
        verdict = check_crisp_cover(cover, budget,
                                    primes=env.primes_over(cover.target),
                                    piece_certificates=piece_certs,
                                    threads=config.threads)
        return {"kind": "cover_verdict", **verdict.to_json(),
                "budget": budget.to_json()}
    if cmd.verb == "descend":
        prop = cmd.args["property"]
        tag = _DESCEND_TAGS.get(prop)
        if tag is None:
            raise CommandError(f"unknown descent property {prop!r}")
        phi = env.maps[cmd.args["map"]]
        cert = env.certificates.get(cmd.args["map"])
        if cert is None:
            raise CommandError(
                f"map {cmd.args['map']!r} has no certificate; certify it first")
        subject_name = cmd.args["subject"]
        if subject_name in env.modules:
            subject = env.modules[subject_name][1]
        elif subject_name in env.maps:
            subject = env.maps[subject_name]
        else:
            raise CommandError(f"subject {subject_name!r} is not a module or map")
        report = descent_consistency(phi, cert, subject, tag)
        return {"kind": "descent", "violation": report.violation,
                **report.to_json()}
    if cmd.verb == "report_json":
        path = Path(cmd.args["path"])
        if config.output_dir is not None and not path.is_absolute():
            path = config.output_dir / path
        snapshot = finalize({
            "schema": SCHEMA_VERSION, "tool": "crispcheck",
            "version": __version__, "reports": list(reports),
        })
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(json.dumps(snapshot, indent=2, sort_keys=True) + "\n")
        return {"kind": "report_written", "path": str(path),
                "count": len(reports)}
    raise CommandError(f"unknown command verb {cmd.verb}")
