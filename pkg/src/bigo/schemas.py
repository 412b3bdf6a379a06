"""Request and response models shared by the HTTP service and the CLI."""

from __future__ import annotations

from typing import Any, Dict, List, Literal, Optional

from pydantic import BaseModel, Field


class CounterexampleModel(BaseModel):
    domain_size: int
    basis: List[str]
    # per variable: one coefficient list over ``basis`` for each domain point
    values: Dict[str, List[List[str]]]
    components: Optional[List["CounterexampleModel"]] = None


class VerdictReport(BaseModel):
    verdict: Literal["valid", "invalid"]
    certificate: Optional[Dict[str, Any]] = None
    counterexample: Optional[CounterexampleModel] = None
    verified: bool
    ms: float


class CheckRequest(BaseModel):
    problem: str = Field(description="problem text in the file grammar")
    reading: Optional[Literal["pointwise", "eventually"]] = None


class VerifyRequest(BaseModel):
    problem: str
    reading: Optional[Literal["pointwise", "eventually"]] = None
    report: VerdictReport


class VerifyResponse(BaseModel):
    verified: bool


class ErrorResponse(BaseModel):
    error: str
    kind: str
