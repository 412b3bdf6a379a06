"""HTTP front end: the same ``run``/``verify`` pair behind FastAPI."""

from __future__ import annotations

from fastapi import FastAPI
from fastapi.responses import JSONResponse

from . import service
from .errors import BigOError, InternalInvariantViolation
from .problem import parse_problem
from .schemas import CheckRequest, ErrorResponse, VerdictReport, VerifyRequest, VerifyResponse

app = FastAPI(title="bigo", description="Decide big-O entailments between linear combinations.")


def _error(exc: Exception, status=422) -> JSONResponse:
    body = ErrorResponse(error=str(exc), kind=type(exc).__name__)
    return JSONResponse(status_code=status, content=body.model_dump())


@app.get("/health")
def health() -> dict:
    return {"status": "ok"}


@app.post("/check", response_model=VerdictReport,
          responses={422: {"model": ErrorResponse}, 500: {"model": ErrorResponse}})
def check(req: CheckRequest, timing: bool = True):
    try:
        problem = parse_problem(req.problem, req.reading)
    except BigOError as exc:
        return _error(exc)
    try:
        return service.run(problem, timing=timing)
    except (InternalInvariantViolation, service.UnverifiedResult) as exc:
        return _error(exc, 500)
    except BigOError as exc:
        return _error(exc)


@app.post("/verify", response_model=VerifyResponse, responses={422: {"model": ErrorResponse}})
def verify(req: VerifyRequest):
    try:
        problem = parse_problem(req.problem, req.reading)
    except BigOError as exc:
        return _error(exc)
    return VerifyResponse(verified=service.verify(req.report, problem))
