"""Acceptance criteria for the toolchain, one PASS/FAIL line each.

Run ``pytest tests/test_acceptance.py -s`` to see the lines inside pytest,
or ``python3 tests/test_acceptance.py`` to print them directly.
"""

from __future__ import annotations

import contextlib
import io
import shutil
import sys
import tempfile
import time
from fractions import Fraction as F
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parent))

from contractkit.analysis import check_coverage, check_disjointness, parse_domain
from contractkit.cli import main as cli
from contractkit.contract import parse_spec, pretty_print
from contractkit.grader import (
    ABSENT, INVALID_FAILS_REFERENCE, VALID, Submission, SubmissionReport, cohort_stats,
    grade_submission, load_bundle,
)
from contractkit.minilang import Value, parse_program
from contractkit.mutation import SURVIVED, mutation_score
from contractkit.runner import run_suite
from contractkit.testgen import TestSuite, generate_suite, lint_suite, parse_suite

from conftest import FIXTURES, fixture_text

RESULTS: dict[int, tuple[bool, str]] = {}


def report(number: int, ok: bool, detail: str) -> None:
    RESULTS[number] = (ok, detail)
    print(f"criterion {number}: {'PASS' if ok else 'FAIL'} ({detail})")


def _power():
    spec = parse_spec(fixture_text("power.contract"))
    domain = parse_domain(spec.signature, "-8..8")
    return spec, domain, generate_suite(spec, domain, 2, 0)


def criterion_1():
    start = time.perf_counter()
    spec = parse_spec(fixture_text("power.contract"))
    round_trip = parse_spec(pretty_print(spec)) == spec
    elapsed = time.perf_counter() - start
    names = [s.name for s in spec.subcontracts]
    ok = (names == ["Happy path", "Zero", "Negative"] and spec.robust and spec.pure
          and round_trip and elapsed < 1.0)
    return ok, f"subcontracts={names}, robust={spec.robust}, pure={spec.pure}, " \
               f"round_trip={round_trip}, {elapsed:.3f}s < 1s"


def criterion_2():
    spec = parse_spec(fixture_text("power.contract"))
    domain = parse_domain(spec.signature, "-50..50")
    start = time.perf_counter()
    disjoint = check_disjointness(spec, domain)
    coverage = check_coverage(spec, domain)
    text = pretty_print(spec)
    cut_start = text.index("@sub Zero {")
    cut_end = text.index("}", cut_start) + 1
    no_zero = parse_spec(text[:cut_start] + text[cut_end:])
    gap = check_coverage(no_zero, domain)
    elapsed = time.perf_counter() - start
    ok = (not disjoint.overlaps and not coverage.uncovered and gap.uncovered == ((0, 0),)
          and disjoint.points_checked == coverage.points_checked == gap.points_checked == 10201
          and elapsed < 5.0)
    return ok, f"overlaps={len(disjoint.overlaps)}, uncovered={len(coverage.uncovered)}, " \
               f"without Zero uncovered={list(gap.uncovered)}, points={coverage.points_checked}, " \
               f"{elapsed:.3f}s < 5s"


def criterion_3():
    spec, _, suite = _power()
    ref = run_suite(parse_program(fixture_text("power_ref.mini")), suite, spec)
    naive = run_suite(parse_program(fixture_text("power_naive.mini")), suite, spec)
    negative = [r for r in naive.results if r.subcontract == "Negative"]
    happy = [r for r in naive.results if r.subcontract == "Happy path"]
    happy_fits = [r for r in happy if isinstance(r.observed, Value)]
    ok = (ref.pass_fraction == 1 and len(suite.cases) == 15
          and len(negative) == 7 and all(r.reason == "missing_exception" for r in negative)
          and len(happy_fits) == 5 and all(r.passed for r in happy_fits)
          and (naive.passed, naive.failed, naive.errored) == (8, 7, 0))
    return ok, f"reference {ref.passed}/{len(ref.results)}; naive fails {len(negative)}/7 Negative " \
               f"(missing_exception), passes {sum(r.passed for r in happy_fits)}/5 Happy path"


def criterion_4():
    spec, domain, suite = _power()
    ref = parse_program(fixture_text("power_ref.mini"))
    start = time.perf_counter()
    full = mutation_score(ref, suite, spec)
    first_interior = {}
    for c in suite.cases:
        if c.origin == "interior":
            first_interior.setdefault(c.subcontract, c)
    thin = TestSuite(suite.function, tuple(first_interior.values()))
    thinned = mutation_score(ref, thin, spec)
    elapsed = time.perf_counter() - start
    killed = lambda rep: {r.id for r in rep.results if r.status != SURVIVED}
    lints = {code for code, _ in lint_suite(thin, spec, domain).codes()}
    survivors = [f"{r.id} {r.description}" for r in full.survivors]
    ok = (full.score == 1 and killed(thinned) < killed(full)
          and {"ONE_PER_SUB", "NO_BOUNDARY"} <= lints and full.total <= 200 and elapsed < 30)
    return ok, f"full suite {full.killed}/{full.total} killed ({full.timeouts} by timeout, " \
               f"survivors={survivors}); thinned {thinned.killed}/{thinned.total}; " \
               f"lints={sorted(lints)}; {elapsed:.2f}s < 30s"


def criterion_5():
    bundle = load_bundle(FIXTURES / "power.bundle")
    zero_wrong = parse_program(fixture_text("power_zero_wrong.mini"))
    pinned = parse_suite(fixture_text("power_pinned_zero.suite"))
    consistent = run_suite(zero_wrong, pinned, bundle.spec).pass_fraction == 1
    bad = grade_submission(bundle, Submission("pinned", zero_wrong, pinned))
    good = grade_submission(bundle, Submission("teacher", bundle.reference, bundle.teacher_suite))
    each_broken_caught = all(run_suite(b, bundle.teacher_suite, bundle.spec).pass_fraction < 1
                             for b in bundle.broken)
    ok = (consistent and bad.test_validity == INVALID_FAILS_REFERENCE
          and good.test_validity == VALID and each_broken_caught)
    return ok, f"pinned suite passes power_zero_wrong={consistent} -> {bad.test_validity}; " \
               f"correct suite -> {good.test_validity}, fails on each broken={each_broken_caught}"


def _sorted_median(values):
    s = sorted(values)
    n = len(s)
    return s[n // 2] if n % 2 else (s[n // 2 - 1] + s[n // 2]) / 2


def criterion_6():
    rows = [("s1", F(1), VALID, F(81, 100)), ("s2", F(1), VALID, F(1)),
            ("s3", F(1, 2), VALID, F(9, 10)), ("s4", F(3, 4), INVALID_FAILS_REFERENCE, None),
            ("s5", F(1, 4), ABSENT, None), ("s6", F(1, 2), ABSENT, None)]
    reports = [SubmissionReport(i, c, v, m) for i, c, v, m in rows]
    stats = cohort_stats(reports)
    # by hand: all six sum to 4 and sort to 1/4 1/2 1/2 3/4 1 1; the four testing
    # ones sum to 13/4; completeness exists for s1..s3 only and sums to 271/100
    hand = {"correctness": (F(2, 3), F(5, 8)),
            "correctness_testing": (F(13, 16), F(7, 8)),
            "correctness_non_testing": (F(3, 8), F(3, 8)),
            "completeness": (F(271, 300), F(9, 10))}
    oracle = {
        "correctness": [c for _, c, _, _ in rows],
        "correctness_testing": [c for _, c, v, _ in rows if v != ABSENT],
        "correctness_non_testing": [c for _, c, v, _ in rows if v == ABSENT],
        "completeness": [m for *_, m in rows if m is not None],
    }
    ok = (stats.testing, stats.non_testing) == (4, 2)
    for metric, values in oracle.items():
        m = getattr(stats, metric)
        expected = (sum(values) / len(values), _sorted_median(values))
        ok = ok and (m.average, m.median) == expected == hand[metric]
    summary = ", ".join(f"{k} avg={getattr(stats, k).average} med={getattr(stats, k).median}"
                        for k in oracle)
    return ok, f"testing={stats.testing}, non-testing={stats.non_testing}; {summary}"


def _cli_bytes(argv) -> bytes:
    out, err = io.StringIO(), io.StringIO()
    with contextlib.redirect_stdout(out), contextlib.redirect_stderr(err):
        code = cli([str(a) for a in argv])
    return f"exit {code}\n{out.getvalue()}".encode()


def criterion_7(runs: int = 3):
    with tempfile.TemporaryDirectory() as tmp:
        tmp = Path(tmp)
        for name, files in {"ann": ["power_ref.mini", "power_teacher.suite"],
                            "bo": ["power_naive.mini"],
                            "cy": ["power_zero_wrong.mini", "power_pinned_zero.suite"]}.items():
            (tmp / name).mkdir()
            for f in files:
                shutil.copy(FIXTURES / f, tmp / name)
        contract = FIXTURES / "power.contract"
        stages = {
            "check": ["check", contract],
            "run": ["run", FIXTURES / "power_naive.mini", FIXTURES / "power_teacher.suite", contract],
            "lint": ["lint", FIXTURES / "power_one_per_sub.suite", contract],
            "mutate": ["mutate", FIXTURES / "power_ref.mini", FIXTURES / "power_one_per_sub.suite",
                       contract],
            "grade": ["grade", FIXTURES / "power.bundle", tmp / "ann", tmp / "bo", tmp / "cy"],
        }
        outputs: dict[str, set[bytes]] = {name: set() for name in [*stages, "gen", "suite_file"]}
        for i in range(runs):
            target = tmp / f"gen{i}.suite"
            outputs["gen"].add(_cli_bytes(["gen", contract, "--seed", "7", "-o", target])
                               .replace(str(target).encode(), b"<out>"))
            outputs["suite_file"].add(target.read_bytes())
            for name, argv in stages.items():
                outputs[name].add(_cli_bytes(argv))
    unstable = [name for name, seen in outputs.items() if len(seen) != 1]
    return not unstable, f"{len(outputs)} outputs x {runs} runs, unstable={unstable}"


CRITERIA = [criterion_1, criterion_2, criterion_3, criterion_4, criterion_5, criterion_6, criterion_7]


def _check(number):
    ok, detail = CRITERIA[number - 1]()
    report(number, ok, detail)
    assert ok, detail


def test_criterion_1_canonical_parse():
    _check(1)


def test_criterion_2_analysis():
    _check(2)


def test_criterion_3_oracle_protocol():
    _check(3)


def test_criterion_4_mutation_completeness():
    _check(4)


def test_criterion_5_validity_gate():
    _check(5)


def test_criterion_6_cohort_statistics():
    _check(6)


def test_criterion_7_determinism():
    _check(7)


if __name__ == "__main__":
    failures = 0
    for n, fn in enumerate(CRITERIA, 1):
        ok, detail = fn()
        report(n, ok, detail)
        failures += not ok
    sys.exit(1 if failures else 0)
