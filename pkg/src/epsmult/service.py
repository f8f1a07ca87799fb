"""HTTP service wrapping the session engine.

POST /session/parse validates session text; POST /session/run executes it
and returns one rendered report per command plus the process exit code the
CLI should use.  Computation never happens outside a request.
"""
from __future__ import annotations

from fastapi import FastAPI
from pydantic import BaseModel, Field

from .errors import SessionError
from .runner import EXIT_PARSE, RunDefaults, run_session
from .session import format_session, parse_session

SCHEMA_VERSION = 1


class SessionRequest(BaseModel):
    session: str
    format: str = Field("csv", pattern="^(csv|json)$")
    mmax: int | None = Field(None, ge=1)
    nmax: int | None = Field(None, ge=1)
    bound: int | None = Field(None, ge=1)
    seed: int | None = None


class ParseRequest(BaseModel):
    session: str


class ErrorRecord(BaseModel):
    code: str
    message: str
    line: int | None = None
    column: int | None = None
    token: str | None = None
    operation: str | None = None
    bound_used: int | None = None
    verified_at: int | None = None


class BindingInfo(BaseModel):
    name: str
    kind: str


class ParseResponse(BaseModel):
    schema_version: int = Field(SCHEMA_VERSION, serialization_alias="schema")
    ok: bool
    bindings: list[BindingInfo] = []
    commands: list[str] = []
    canonical: str = ""
    error: ErrorRecord | None = None


class ReportPayload(BaseModel):
    filename: str
    content: str


class RunResponse(BaseModel):
    schema_version: int = Field(SCHEMA_VERSION, serialization_alias="schema")
    exit_code: int
    reports: list[ReportPayload] = []
    error: ErrorRecord | None = None


app = FastAPI(
    title="epsmult",
    description="Exact monomial-ideal experiments over affine semigroup rings",
)


@app.get("/health")
def health() -> dict:
    return {"status": "ok"}


@app.post("/session/parse", response_model=ParseResponse)
def parse(req: ParseRequest) -> ParseResponse:
    try:
        session = parse_session(req.session)
    except SessionError as exc:
        return ParseResponse(ok=False, error=ErrorRecord(**exc.record()))
    bindings = [
        BindingInfo(name=d.name, kind=type(d).__name__.removesuffix("Decl").lower())
        for d in session.decls
    ]
    commands = [c.verb for c in session.commands]
    return ParseResponse(ok=True, bindings=bindings, commands=commands,
                         canonical=format_session(session))


@app.post("/session/run", response_model=RunResponse)
def run(req: SessionRequest) -> RunResponse:
    try:
        session = parse_session(req.session)
    except SessionError as exc:
        return RunResponse(exit_code=EXIT_PARSE, error=ErrorRecord(**exc.record()))
    defaults = RunDefaults(mmax=req.mmax, nmax=req.nmax, bound=req.bound,
                           seed=req.seed)
    result = run_session(session, fmt=req.format, defaults=defaults)
    reports = [ReportPayload(filename=f, content=c) for f, c in result.reports]
    error = ErrorRecord(**result.error) if result.error else None
    return RunResponse(exit_code=result.exit_code, reports=reports, error=error)
