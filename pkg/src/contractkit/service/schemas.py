"""Request and response models for the HTTP service.

Fractions travel as exact strings ("8/15"), matching the CLI records.
"""

from __future__ import annotations

from typing import Any, Optional, Union

from pydantic import BaseModel, ConfigDict, Field

from contractkit.minilang import DEFAULT_FUEL
from contractkit.mutation import OPERATORS
from contractkit.testgen import DEFAULT_INTERIOR

Record = dict[str, Any]
DomainText = Union[str, list[str]]


class _Strict(BaseModel):
    model_config = ConfigDict(extra="forbid")


class CheckRequest(_Strict):
    contract: str
    domain: DomainText = "-50..50"


class CheckResponse(BaseModel):
    function: str
    subcontracts: list[str]
    robust: bool
    pure: bool
    disjoint: bool
    covered: Optional[bool] = None
    records: list[Record]


class GenerateRequest(_Strict):
    contract: str
    domain: DomainText = "-8..8"
    interior: int = Field(DEFAULT_INTERIOR, ge=0)
    seed: int = 0


class GenerateResponse(BaseModel):
    suite: str
    cases: int
    warnings: list[str]


class RunRequest(_Strict):
    contract: str
    impl: str
    suite: str
    fuel: int = Field(DEFAULT_FUEL, ge=1)


class RunResponse(BaseModel):
    pass_fraction: str
    passed: int
    failed: int
    errored: int
    records: list[Record]


class LintRequest(_Strict):
    contract: str
    suite: str
    domain: DomainText = "-8..8"


class LintResponse(BaseModel):
    warnings: list[Record]


class MutateRequest(_Strict):
    contract: str
    impl: str
    suite: str
    operators: list[str] = Field(default_factory=lambda: list(OPERATORS))
    fuel: int = Field(DEFAULT_FUEL, ge=1)


class MutateResponse(BaseModel):
    score: str
    total: int
    killed: int
    survived: int
    complete: bool
    records: list[Record]


class BundleModel(_Strict):
    contract: str
    reference: str
    broken: list[str] = Field(min_length=1)
    teacher_suite: str
    domain: DomainText = "-8..8"
    operators: list[str] = Field(default_factory=lambda: list(OPERATORS))
    fuel: int = Field(DEFAULT_FUEL, ge=1)


class SubmissionModel(_Strict):
    id: str = Field(min_length=1)
    impl: str
    suite: Optional[str] = None


class GradeRequest(_Strict):
    bundle: BundleModel
    submissions: list[SubmissionModel] = Field(min_length=1)


class SubmissionRecord(BaseModel):
    id: str
    correctness: str
    test_validity: str
    completeness: Optional[str] = None
    lints: list[str] = Field(default_factory=list)


class GradeResponse(BaseModel):
    submissions: list[SubmissionRecord]
    cohort: Record


class CohortRequest(_Strict):
    reports: list[SubmissionRecord] = Field(min_length=1)


class CohortResponse(BaseModel):
    cohort: Record


class ErrorResponse(BaseModel):
    error: str
    diagnostics: list[Record] = Field(default_factory=list)
