"""Thin command-line client.

By default every command runs in-process against the same service layer the
HTTP endpoints use; --server posts the identical payload to a running
instance instead.  Exit codes: 0 = all commands completed (NotCrisp
findings included), 1 = parse/engine error, 2 = invariant VIOLATION.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import __version__
from .models import BudgetModel, ParseRequest, RunRequest
from .reports import strip_timing


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="crispcheck",
                                     description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    def add_budget_flags(p):
        p.add_argument("--budget-rank", type=int, default=None)
        p.add_argument("--budget-degree", type=int, default=None)
        p.add_argument("--budget-candidates", type=int, default=None)
        p.add_argument("--time-limit-ms", type=int, default=None)
        p.add_argument("--seed", type=int, default=0,
                       help="seed for randomized property probes only; "
                            "never affects verdicts")
        p.add_argument("--threads", type=int, default=1)
        p.add_argument("--emit-json", type=Path, default=None)
        p.add_argument("--server", default=None,
                       help="base URL of a running service; default in-process")
        p.add_argument("--strip-timing", action="store_true",
                       help="drop timing fields from emitted JSON")

    run_p = sub.add_parser("run", help="run a .crisp script")
    run_p.add_argument("script", type=Path)
    add_budget_flags(run_p)

    corpus_p = sub.add_parser("corpus", help="run every shipped corpus script")
    add_budget_flags(corpus_p)

    parse_p = sub.add_parser("parse", help="syntax-check a script")
    parse_p.add_argument("script", type=Path)
    parse_p.add_argument("--server", default=None)

    serve_p = sub.add_parser("serve", help="start the HTTP service")
    serve_p.add_argument("--host", default="127.0.0.1")
    serve_p.add_argument("--port", type=int, default=8431)
    return parser


def _budget_from_args(args) -> BudgetModel:
    base = BudgetModel()
    return BudgetModel(
        max_rank=args.budget_rank or base.max_rank,
        max_degree=args.budget_degree or base.max_degree,
        max_candidates=args.budget_candidates or base.max_candidates,
        time_limit_ms=args.time_limit_ms or base.time_limit_ms)


def _emit(doc: dict, args) -> None:
    if args.strip_timing:
        doc = strip_timing(doc)
    text = json.dumps(doc, indent=2, sort_keys=True) + "\n"
    if args.emit_json:
        args.emit_json.parent.mkdir(parents=True, exist_ok=True)
        args.emit_json.write_text(text)
    else:
        sys.stdout.write(text)


def cmd_run(args) -> int:
    request = RunRequest(script=args.script.read_text(),
                         budget=_budget_from_args(args),
                         threads=args.threads, seed=args.seed)
    if args.server:
        import httpx
        response = httpx.post(f"{args.server.rstrip('/')}/run",
                              json=request.model_dump(), timeout=600.0)
        response.raise_for_status()
        payload = response.json()
    else:
        from .dsl import ScriptError
        from .service import run_request
        try:
            payload = run_request(request).model_dump()
        except ScriptError as exc:
            sys.stderr.write(f"error: {exc}\n")
            return 1
    _emit(payload, args)
    return payload["exit_code"]


def cmd_corpus(args) -> int:
    if args.server:
        import httpx
        response = httpx.post(f"{args.server.rstrip('/')}/corpus/run",
                              params={"threads": args.threads, "seed": args.seed},
                              json=_budget_from_args(args).model_dump(),
                              timeout=600.0)
        response.raise_for_status()
        payload = response.json()
    else:
        from .service import run_corpus
        payload = run_corpus(_budget_from_args(args), args.threads,
                             args.seed).model_dump()
    _emit(payload, args)
    return payload["exit_code"]


def cmd_parse(args) -> int:
    request = ParseRequest(script=args.script.read_text())
    if args.server:
        import httpx
        response = httpx.post(f"{args.server.rstrip('/')}/parse",
                              json=request.model_dump(), timeout=60.0)
        response.raise_for_status()
        payload = response.json()
    else:
        from .service import parse_request
        payload = parse_request(request).model_dump()
    sys.stdout.write(json.dumps(payload, indent=2, sort_keys=True) + "\n")
    return 0 if payload["ok"] else 1


def cmd_serve(args) -> int:
    import uvicorn
    uvicorn.run("crispcheck.service:app", host=args.host, port=args.port)
    return 0


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    if args.command == "run":
        return cmd_run(args)
    if args.command == "corpus":
        return cmd_corpus(args)
    if args.command == "parse":
        return cmd_parse(args)
    if args.command == "serve":
        return cmd_serve(args)
    raise AssertionError("unreachable")


if __name__ == "__main__":
    sys.exit(main())
