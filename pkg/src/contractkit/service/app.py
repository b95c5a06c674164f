"""FastAPI application exposing the toolchain over HTTP.

Run with ``contractkit serve`` or ``uvicorn contractkit.service.app:app``.
Parse errors answer 422 with the diagnostics; other usage errors answer 400.
"""

from __future__ import annotations

from fractions import Fraction

from fastapi import FastAPI, Request
from fastapi.responses import JSONResponse

from contractkit import __version__
from contractkit.analysis import check_coverage, check_disjointness, parse_domain
from contractkit.contract import parse_spec
from contractkit.diagnostics import ParseError, UsageError
from contractkit.grader import (
    AssignmentBundle, Submission, SubmissionReport, cohort_stats, grade_submission,
)
from contractkit.minilang import parse_program
from contractkit.mutation import mutation_score, parse_operators
from contractkit.runner import run_suite
from contractkit.testgen import (
    GenerationError, format_suite, generate_suite, lint_suite, parse_suite, relational_comparisons,
)
from contractkit.service import schemas as s

app = FastAPI(title="contractkit", version=__version__)


@app.exception_handler(ParseError)
async def _parse_error(_: Request, exc: ParseError):
    body = s.ErrorResponse(error="parse error", diagnostics=[d.as_record() for d in exc.diagnostics])
    return JSONResponse(status_code=422, content=body.model_dump())


@app.exception_handler(UsageError)
async def _usage_error(_: Request, exc: UsageError):
    return JSONResponse(status_code=400, content=s.ErrorResponse(error=str(exc)).model_dump())


@app.exception_handler(GenerationError)
async def _generation_error(_: Request, exc: GenerationError):
    return JSONResponse(status_code=400, content=s.ErrorResponse(error=str(exc)).model_dump())


def _operators(names: list[str]) -> frozenset[str]:
    return parse_operators(",".join(names))


@app.get("/health")
def health() -> dict:
    return {"status": "ok", "version": __version__}


@app.post("/check", response_model=s.CheckResponse)
def check(req: s.CheckRequest):
    spec = parse_spec(req.contract)
    domain = parse_domain(spec.signature, req.domain)
    disjoint = check_disjointness(spec, domain)
    records = disjoint.records("disjointness")
    covered = None
    if spec.robust:
        coverage = check_coverage(spec, domain)
        records += coverage.records("coverage")
        covered = not coverage.uncovered
    return s.CheckResponse(function=spec.function, subcontracts=[x.name for x in spec.subcontracts],
                           robust=spec.robust, pure=spec.pure, disjoint=disjoint.clean,
                           covered=covered, records=records)


@app.post("/generate", response_model=s.GenerateResponse)
def generate(req: s.GenerateRequest):
    spec = parse_spec(req.contract)
    suite = generate_suite(spec, parse_domain(spec.signature, req.domain), req.interior, req.seed)
    warnings = [f"{sub}: '{text}' compares two expressions; no boundary values derived"
                for sub, text in relational_comparisons(spec)]
    return s.GenerateResponse(suite=format_suite(suite), cases=len(suite.cases), warnings=warnings)


@app.post("/run", response_model=s.RunResponse)
def run(req: s.RunRequest):
    result = run_suite(parse_program(req.impl), parse_suite(req.suite), parse_spec(req.contract),
                       req.fuel)
    return s.RunResponse(pass_fraction=str(result.pass_fraction), passed=result.passed,
                         failed=result.failed, errored=result.errored,
                         records=[r.as_record() for r in result.results])


@app.post("/lint", response_model=s.LintResponse)
def lint(req: s.LintRequest):
    spec = parse_spec(req.contract)
    report = lint_suite(parse_suite(req.suite), spec, parse_domain(spec.signature, req.domain))
    return s.LintResponse(warnings=[w.as_record() for w in report.warnings])


@app.post("/mutate", response_model=s.MutateResponse)
def mutate(req: s.MutateRequest):
    report = mutation_score(parse_program(req.impl), parse_suite(req.suite),
                            parse_spec(req.contract), _operators(req.operators), req.fuel)
    return s.MutateResponse(score=str(report.score), total=report.total, killed=report.killed,
                            survived=len(report.survivors), complete=report.complete,
                            records=[r.as_record() for r in report.results])


@app.post("/grade", response_model=s.GradeResponse)
def grade(req: s.GradeRequest):
    b = req.bundle
    spec = parse_spec(b.contract)
    bundle = AssignmentBundle(
        spec=spec, reference=parse_program(b.reference),
        broken=tuple(parse_program(text) for text in b.broken),
        teacher_suite=parse_suite(b.teacher_suite),
        domain=parse_domain(spec.signature, b.domain),
        operators=_operators(b.operators), fuel=b.fuel)
    bundle.validate()
    ids = [sub.id for sub in req.submissions]
    if len(set(ids)) != len(ids):
        raise UsageError("submission ids must be unique")
    reports = sorted(
        (grade_submission(bundle, Submission(sub.id, parse_program(sub.impl),
                                             parse_suite(sub.suite) if sub.suite else None))
         for sub in req.submissions),
        key=lambda r: r.id)
    return s.GradeResponse(
        submissions=[s.SubmissionRecord(**{k: v for k, v in r.as_record().items() if k != "kind"})
                     for r in reports],
        cohort=cohort_stats(reports).as_record())


@app.post("/cohort", response_model=s.CohortResponse)
def cohort(req: s.CohortRequest):
    try:
        reports = [SubmissionReport(r.id, Fraction(r.correctness), r.test_validity,
                                    None if r.completeness is None else Fraction(r.completeness))
                   for r in req.reports]
    except (ValueError, ZeroDivisionError) as exc:
        raise UsageError(f"malformed fraction in report: {exc}") from None
    return s.CohortResponse(cohort=cohort_stats(reports).as_record())
