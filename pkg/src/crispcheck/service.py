"""FastAPI service wrapping the engine; the CLI is a thin client over the
same functions (in-process by default, HTTP with --server)."""

from __future__ import annotations

from importlib import resources
from pathlib import Path

from fastapi import FastAPI, HTTPException

from . import __version__
from .dsl import ScriptError, parse_script
from .models import (BudgetModel, CorpusEntry, CorpusRunResponse,
                     ParseRequest, ParseResponse, RunRequest, RunResponse,
                     VersionResponse)
from .reports import SCHEMA_VERSION, determinism_hash, finalize
from .runner import RunConfig, run_text


def shipped_corpus() -> dict[str, str]:
    """Name -> script text for the .crisp files shipped with the package."""
    out = {}
    root = resources.files("crispcheck") / "corpus"
    for entry in sorted(root.iterdir(), key=lambda e: e.name):
        if entry.name.endswith(".crisp"):
            out[entry.name[:-len(".crisp")]] = entry.read_text()
    return out


def run_request(request: RunRequest) -> RunResponse:
    budget = (request.budget or BudgetModel()).to_budget()
    config = RunConfig(budget=budget, threads=request.threads, seed=request.seed)
    result = run_text(request.script, config)
    doc = result.document
    return RunResponse(schema_version=doc["schema"], tool=doc["tool"],
                       version=doc["version"], input_sha256=doc["input_sha256"],
                       exit_code=result.exit_code, reports=doc["reports"],
                       determinism_hash=doc["determinism_hash"])


def parse_request(request: ParseRequest) -> ParseResponse:
    try:
        script = parse_script(request.script)
    except ScriptError as exc:
        return ParseResponse(ok=False, error=exc.message, line=exc.line,
                             column=exc.col)
    return ParseResponse(ok=True, statements=len(script.statements),
                         declarations=len(script.declarations()),
                         commands=len(script.commands()))


def run_corpus(budget: BudgetModel | None = None, threads: int = 1,
               seed: int = 0) -> CorpusRunResponse:
    config = RunConfig(budget=(budget or BudgetModel()).to_budget(),
                       threads=threads, seed=seed)
    scripts = []
    exit_code = 0
    for name, text in shipped_corpus().items():
        result = run_text(text, config)
        exit_code = max(exit_code, result.exit_code)
        scripts.append({"name": name,
                        "input_sha256": result.document["input_sha256"],
                        "exit_code": result.exit_code,
                        "reports": result.document["reports"]})
    doc = finalize({"schema": SCHEMA_VERSION, "tool": "crispcheck",
                    "version": __version__, "scripts": scripts})
    return CorpusRunResponse(schema_version=SCHEMA_VERSION, tool="crispcheck",
                             version=__version__, exit_code=exit_code,
                             scripts=scripts,
                             determinism_hash=doc["determinism_hash"])


def create_app() -> FastAPI:
    app = FastAPI(title="crispcheck",
                  description="Crispness (purity) checks for ring maps "
                              "between finitely presented algebras",
                  version=__version__)

    @app.get("/health")
    def health():
        return {"status": "ok"}

    @app.get("/version", response_model=VersionResponse)
    def version():
        return VersionResponse(tool="crispcheck", version=__version__,
                               schema_version=SCHEMA_VERSION)

    @app.get("/corpus", response_model=list[CorpusEntry])
    def corpus():
        entries = []
        for name, text in shipped_corpus().items():
            entries.append(CorpusEntry(name=name,
                                       statements=len(parse_script(text).statements)))
        return entries

    @app.post("/parse", response_model=ParseResponse)
    def parse(request: ParseRequest):
        return parse_request(request)

    @app.post("/run", response_model=RunResponse)
    def run(request: RunRequest):
        try:
            return run_request(request)
        except ScriptError as exc:
            raise HTTPException(status_code=422, detail=str(exc))

    @app.post("/corpus/run", response_model=CorpusRunResponse)
    def corpus_run(budget: BudgetModel | None = None, threads: int = 1,
                   seed: int = 0):
        return run_corpus(budget, threads, seed)

    return app


app = create_app()
