"""Grading submissions against an assignment bundle, and cohort statistics.

Per submission:

* correctness: fraction of teacher tests the submitted implementation passes;
* test validity: the submitted suite must pass on the reference
  implementation and fail at least one case on some broken implementation;
* completeness: mutation score of a valid suite against the reference.
"""

from __future__ import annotations

import statistics
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path

from contractkit.analysis import Domain, parse_domain
from contractkit.contract import Specification, parse_spec
from contractkit.diagnostics import ParseError, UsageError, error
from contractkit.minilang import DEFAULT_FUEL, Program, parse_program
from contractkit.mutation import DEFAULT_OPERATORS, mutation_score, parse_operators
from contractkit.runner import run_suite
from contractkit.testgen import LintReport, TestSuite, lint_suite, parse_suite

VALID = "valid"
INVALID_FAILS_REFERENCE = "invalid_fails_reference"
INVALID_PASSES_BROKEN = "invalid_passes_broken"
ABSENT = "absent"

MANIFEST_KEYS = ("contract", "reference", "broken", "teacher_suite", "domain", "operators", "fuel")


class BundleError(UsageError):
    pass


@dataclass(frozen=True)
class AssignmentBundle:
    spec: Specification
    reference: Program
    broken: tuple[Program, ...]
    teacher_suite: TestSuite
    domain: Domain
    operators: frozenset = DEFAULT_OPERATORS
    fuel: int = DEFAULT_FUEL
    broken_names: tuple[str, ...] = field(default=(), compare=False)

    def validate(self) -> None:
        """Raise BundleError unless the reference passes every teacher test and
        each broken implementation fails at least one."""
        if not self.broken:
            raise BundleError("a bundle needs at least one broken implementation")
        ref = run_suite(self.reference, self.teacher_suite, self.spec, self.fuel)
        if ref.pass_fraction != 1:
            bad = [r.case for r in ref.results if not r.passed]
            raise BundleError(f"reference implementation fails its own teacher suite: {', '.join(bad)}")
        names = self.broken_names or tuple(f"broken #{i + 1}" for i in range(len(self.broken)))
        for name, impl in zip(names, self.broken):
            res = run_suite(impl, self.teacher_suite, self.spec, self.fuel)
            if res.pass_fraction == 1:
                raise BundleError(f"{name} passes every teacher test, so it cannot serve as broken")


@dataclass(frozen=True)
class Submission:
    id: str
    impl: Program
    suite: TestSuite | None = None


@dataclass(frozen=True)
class SubmissionReport:
    id: str
    correctness: Fraction
    test_validity: str
    completeness: Fraction | None = None
    lints: LintReport = field(default_factory=LintReport)

    @property
    def testing(self) -> bool:
        return self.test_validity != ABSENT

    def as_record(self) -> dict:
        return {"kind": "submission", "id": self.id, "correctness": str(self.correctness),
                "test_validity": self.test_validity,
                "completeness": None if self.completeness is None else str(self.completeness),
                "lints": [w.code + ":" + w.subcontract for w in self.lints.warnings]}


def grade_submission(bundle: AssignmentBundle, submission: Submission,
                     fuel: int | None = None) -> SubmissionReport:
    fuel = fuel or bundle.fuel
    spec = bundle.spec
    if not submission.impl.has_function(spec.function):
        raise UsageError(f"submission {submission.id!r} does not define {spec.function!r}")
    correctness = run_suite(submission.impl, bundle.teacher_suite, spec, fuel).pass_fraction
    suite = submission.suite
    if suite is None:
        return SubmissionReport(submission.id, correctness, ABSENT)
    lints = lint_suite(suite, spec, bundle.domain)
    on_reference = run_suite(bundle.reference, suite, spec, fuel)
    if on_reference.pass_fraction != 1:
        return SubmissionReport(submission.id, correctness, INVALID_FAILS_REFERENCE, None, lints)
    catches_broken = any(
        run_suite(impl, suite, spec, fuel, stop_on_failure=True).pass_fraction != 1
        for impl in bundle.broken)
    if not catches_broken:
        return SubmissionReport(submission.id, correctness, INVALID_PASSES_BROKEN, None, lints)
    report = mutation_score(bundle.reference, suite, spec, bundle.operators, fuel)
    return SubmissionReport(submission.id, correctness, VALID, report.score, lints)


@dataclass(frozen=True)
class MetricStats:
    n: int
    average: Fraction | None
    median: Fraction | None

    @classmethod
    def of(cls, values) -> "MetricStats":
        values = [Fraction(v) for v in values]
        if not values:
            return cls(0, None, None)
        return cls(len(values), statistics.mean(values), statistics.median(values))

    def as_dict(self) -> dict:
        show = lambda v: None if v is None else str(v)
        return {"n": self.n, "average": show(self.average), "median": show(self.median)}


@dataclass(frozen=True)
class CohortReport:
    testing: int
    non_testing: int
    correctness: MetricStats
    correctness_testing: MetricStats
    correctness_non_testing: MetricStats
    completeness: MetricStats

    def as_record(self) -> dict:
        return {"kind": "cohort", "submissions": self.testing + self.non_testing,
                "testing": self.testing, "non_testing": self.non_testing,
                "correctness": self.correctness.as_dict(),
                "correctness_testing": self.correctness_testing.as_dict(),
                "correctness_non_testing": self.correctness_non_testing.as_dict(),
                "completeness": self.completeness.as_dict()}


def cohort_stats(reports: list[SubmissionReport]) -> CohortReport:
    """Averages and medians of correctness (all, testing, non-testing) and completeness.

    Completeness only exists for submissions with a valid suite, so the
    non-testing group never contributes to it.
    """
    if not reports:
        raise UsageError("cohort statistics need at least one submission report")
    reports = sorted(reports, key=lambda r: r.id)
    testing = [r for r in reports if r.testing]
    non_testing = [r for r in reports if not r.testing]
    return CohortReport(
        len(testing), len(non_testing),
        MetricStats.of(r.correctness for r in reports),
        MetricStats.of(r.correctness for r in testing),
        MetricStats.of(r.correctness for r in non_testing),
        MetricStats.of(r.completeness for r in testing if r.completeness is not None),
    )


# -- files

def _read(path: Path) -> str:
    try:
        return path.read_text(encoding="utf-8")
    except OSError as exc:
        raise BundleError(f"cannot read {path}: {exc.strerror}") from None


def load_spec(path: Path) -> Specification:
    try:
        return parse_spec(_read(path))
    except ParseError as exc:
        raise exc.with_source(str(path)) from None


def load_program(path: Path) -> Program:
    try:
        return parse_program(_read(path))
    except ParseError as exc:
        raise exc.with_source(str(path)) from None


def load_suite(path: Path) -> TestSuite:
    try:
        return parse_suite(_read(path))
    except ParseError as exc:
        raise exc.with_source(str(path)) from None


def parse_manifest(text: str) -> dict[str, str]:
    """``key = value`` lines; ``#`` starts a comment line."""
    entries: dict[str, str] = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        key, sep, value = line.partition("=")
        key = key.strip()
        if not sep or not key:
            raise ParseError([error("E301", lineno, 1, f"expected 'key = value', found {line!r}")])
        if key not in MANIFEST_KEYS:
            raise ParseError([error("E301", lineno, 1, f"unknown manifest key {key!r}")])
        if key in entries:
            raise ParseError([error("E301", lineno, 1, f"duplicate manifest key {key!r}")])
        entries[key] = value.strip()
    for key in ("contract", "reference", "broken", "teacher_suite"):
        if key not in entries:
            raise ParseError([error("E301", 1, 1, f"manifest is missing {key!r}")])
    return entries


def load_bundle(manifest_path: Path, validate: bool = True) -> AssignmentBundle:
    manifest_path = Path(manifest_path)
    try:
        entries = parse_manifest(_read(manifest_path))
    except ParseError as exc:
        raise exc.with_source(str(manifest_path)) from None
    base = manifest_path.parent
    spec = load_spec(base / entries["contract"])
    broken_paths = [base / p.strip() for p in entries["broken"].split(",") if p.strip()]
    bundle = AssignmentBundle(
        spec=spec,
        reference=load_program(base / entries["reference"]),
        broken=tuple(load_program(p) for p in broken_paths),
        teacher_suite=load_suite(base / entries["teacher_suite"]),
        domain=parse_domain(spec.signature, entries.get("domain", "-8..8")),
        operators=parse_operators(entries.get("operators", ",".join(sorted(DEFAULT_OPERATORS)))),
        fuel=int(entries.get("fuel", DEFAULT_FUEL)),
        broken_names=tuple(p.name for p in broken_paths),
    )
    if validate:
        bundle.validate()
    return bundle


def load_submission(directory: Path) -> Submission:
    """A submission directory holds one ``.mini`` file and at most one ``.suite`` file."""
    directory = Path(directory)
    if not directory.is_dir():
        raise UsageError(f"{directory} is not a submission directory")
    impls = sorted(directory.glob("*.mini"))
    suites = sorted(directory.glob("*.suite"))
    if len(impls) != 1:
        raise UsageError(f"{directory} must contain exactly one .mini file, found {len(impls)}")
    if len(suites) > 1:
        raise UsageError(f"{directory} contains more than one .suite file")
    return Submission(directory.name, load_program(impls[0]),
                      load_suite(suites[0]) if suites else None)
