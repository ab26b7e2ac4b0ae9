"""Request/response models for the HTTP service (and the CLI, which builds
the same payloads)."""

from __future__ import annotations

from typing import Optional

from pydantic import BaseModel, Field

from .verdicts import DEFAULT_BUDGET, SearchBudget


class BudgetModel(BaseModel):
    max_rank: int = Field(DEFAULT_BUDGET.max_rank, gt=0)
    max_degree: int = Field(DEFAULT_BUDGET.max_degree, gt=0)
    max_candidates: int = Field(DEFAULT_BUDGET.max_candidates, gt=0)
    time_limit_ms: int = Field(DEFAULT_BUDGET.time_limit_ms, gt=0)

    def to_budget(self) -> SearchBudget:
        return SearchBudget(self.max_rank, self.max_degree,
                            self.max_candidates, self.time_limit_ms)


class RunRequest(BaseModel):
    script: str
    budget: Optional[BudgetModel] = None
    threads: int = Field(1, ge=1, le=64)
    seed: int = 0


class RunResponse(BaseModel):
    schema_version: int
    tool: str
    version: str
    input_sha256: str
    exit_code: int
    reports: list[dict]
    determinism_hash: str


class ParseRequest(BaseModel):
    script: str


class ParseResponse(BaseModel):
    ok: bool
    statements: int = 0
    declarations: int = 0
    commands: int = 0
    error: Optional[str] = None
    line: Optional[int] = None
    column: Optional[int] = None


class VersionResponse(BaseModel):
    tool: str
    version: str
    schema_version: int


class CorpusEntry(BaseModel):
    name: str
    statements: int


class CorpusRunResponse(BaseModel):
    schema_version: int
    tool: str
    version: str
    exit_code: int
    scripts: list[dict]
    determinism_hash: str
