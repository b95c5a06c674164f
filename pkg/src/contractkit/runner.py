"""Run test cases against a Program and judge them with the contract's oracle."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from contractkit.contract import RESULT, Ensures, Specification, compile_predicate
from contractkit.contract.predicate import EvalFault
from contractkit.diagnostics import UsageError
from contractkit.minilang import DEFAULT_FUEL, Fault, Outcome, Program, Thrown, Value, run_function
from contractkit.testgen import TestCase, TestSuite

PASS, FAIL, ERROR = "pass", "fail", "error"
REASONS = (
    "postcondition_violated", "wrong_exception", "unexpected_exception", "missing_exception",
    "runtime_fault", "oracle_fault", "no_subcontract", "ambiguous_subcontract",
)
ERROR_REASONS = ("oracle_fault", "no_subcontract", "ambiguous_subcontract")


@dataclass(frozen=True)
class TestResult:
    __test__ = False

    case: str
    verdict: str
    reason: str | None
    observed: Outcome
    subcontract: str | None = None

    def __post_init__(self):
        if (self.verdict == PASS) != (self.reason is None):
            raise ValueError("a reason is given exactly when the case does not pass")
        if self.verdict == ERROR and self.reason not in ERROR_REASONS:
            raise ValueError(f"{self.reason} is a failure, not an error")

    @property
    def passed(self) -> bool:
        return self.verdict == PASS

    def as_record(self) -> dict:
        return {"kind": "test", "case": self.case, "verdict": self.verdict,
                "reason": self.reason, "subcontract": self.subcontract,
                "observed": self.observed.as_record()}


@dataclass(frozen=True)
class SuiteResult:
    results: tuple[TestResult, ...]

    @property
    def passed(self) -> int:
        return sum(r.verdict == PASS for r in self.results)

    @property
    def failed(self) -> int:
        return sum(r.verdict == FAIL for r in self.results)

    @property
    def errored(self) -> int:
        return sum(r.verdict == ERROR for r in self.results)

    @property
    def pass_fraction(self) -> Fraction:
        # an empty suite passes vacuously; emptiness is judged elsewhere
        if not self.results:
            return Fraction(1)
        return Fraction(self.passed, len(self.results))

    def summary_record(self) -> dict:
        return {"kind": "suite_result", "passed": self.passed, "failed": self.failed,
                "errored": self.errored, "total": len(self.results),
                "pass_fraction": str(self.pass_fraction)}


class Oracle:
    """Compiled pre- and postconditions of one contract, reusable across runs."""

    def __init__(self, spec: Specification):
        self.spec = spec
        names = spec.signature.param_names
        self.requires = [compile_predicate(s.requires, names) for s in spec.subcontracts]
        self.ensures = [compile_predicate(s.behavior.predicate, names + (RESULT,))
                        if isinstance(s.behavior, Ensures) else None
                        for s in spec.subcontracts]

    def select(self, args: tuple) -> tuple[list[int], bool]:
        """Indices of subcontracts whose precondition holds; flag set if one faulted."""
        hits, faulted = [], False
        for i, check in enumerate(self.requires):
            try:
                if check(args):
                    hits.append(i)
            except EvalFault:
                faulted = True
        return hits, faulted

    def judge(self, case: TestCase, observed: Outcome) -> tuple[str, str | None, str | None]:
        if case.expect is not None:
            return _judge_pinned(case.expect, observed) + (None,)
        hits, faulted = self.select(tuple(case.args))
        if len(hits) > 1:
            return ERROR, "ambiguous_subcontract", None
        if not hits:
            return ERROR, ("oracle_fault" if faulted else "no_subcontract"), None
        index = hits[0]
        sub = self.spec.subcontracts[index]
        ensures = self.ensures[index]
        if ensures is not None:
            if isinstance(observed, Thrown):
                return FAIL, "unexpected_exception", sub.name
            if isinstance(observed, Fault):
                return FAIL, "runtime_fault", sub.name
            try:
                ok = ensures(tuple(case.args) + (observed.value,))
            except EvalFault:
                return ERROR, "oracle_fault", sub.name
            return (PASS, None, sub.name) if ok else (FAIL, "postcondition_violated", sub.name)
        expected = sub.behavior.exception
        if isinstance(observed, Value):
            return FAIL, "missing_exception", sub.name
        if isinstance(observed, Fault):
            return FAIL, "runtime_fault", sub.name
        if observed.exception != expected:
            return FAIL, "wrong_exception", sub.name
        return PASS, None, sub.name


def _judge_pinned(expect: Outcome, observed: Outcome) -> tuple[str, str | None]:
    if isinstance(observed, Fault):
        return FAIL, "runtime_fault"
    if isinstance(expect, Value):
        if isinstance(observed, Thrown):
            return FAIL, "unexpected_exception"
        if observed.value != expect.value or type(observed.value) is not type(expect.value):
            return FAIL, "postcondition_violated"
        return PASS, None
    if isinstance(observed, Value):
        return FAIL, "missing_exception"
    if observed.exception != expect.exception:
        return FAIL, "wrong_exception"
    return PASS, None


def _check_target(program: Program, spec: Specification) -> None:
    if not program.has_function(spec.function):
        raise UsageError(f"program does not define {spec.function!r}")


def run_test(program: Program, case: TestCase, spec: Specification, fuel: int = DEFAULT_FUEL,
             oracle: Oracle | None = None) -> TestResult:
    """Execute one case and judge it.

    The subcontract whose precondition holds for the arguments supplies the
    oracle; none or several holding is an error verdict, never resolved by
    picking one. A case carrying a pinned expectation is judged against that
    expectation instead.
    """
    _check_target(program, spec)
    oracle = oracle or Oracle(spec)
    observed = run_function(program, spec.function, case.args, fuel)
    verdict, reason, sub = oracle.judge(case, observed)
    return TestResult(case.name, verdict, reason, observed, sub)


def run_suite(program: Program, suite: TestSuite, spec: Specification,
              fuel: int = DEFAULT_FUEL, stop_on_failure: bool = False) -> SuiteResult:
    if suite.function != spec.function:
        raise UsageError(f"suite tests {suite.function!r}, contract describes {spec.function!r}")
    _check_target(program, spec)
    oracle = Oracle(spec)
    results = []
    for case in suite.cases:
        result = run_test(program, case, spec, fuel, oracle)
        results.append(result)
        if stop_on_failure and not result.passed:
            break
    return SuiteResult(tuple(results))
