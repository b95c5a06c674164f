import time

import pytest
from hypothesis import given, settings, strategies as st

from contractkit.contract import parse_spec
from contractkit.diagnostics import UsageError
from contractkit.minilang import format_program, parse_program, run_function
from contractkit.mutation import (
    KILLED, SURVIVED, TIMEOUT, DEFAULT_OPERATORS, generate_mutants, mutation_score,
    parse_operators,
)
from contractkit.runner import run_test
from contractkit.testgen import TestSuite, parse_suite

from conftest import fixture_text


@pytest.fixture(scope="module")
def ref_mutants(power_ref):
    return generate_mutants(power_ref, "power")


@pytest.fixture(scope="module")
def full_report(power_ref, power_suite, power_spec):
    return mutation_score(power_ref, power_suite, power_spec)


def test_aor_on_loop_body(ref_mutants):
    aor = [(m.location, m.description) for m in ref_mutants if m.operator == "AOR"]
    assert ((8, 15), "* → /") in aor


def test_operator_inventory(ref_mutants):
    assert [m.id for m in ref_mutants] == [f"M{i}" for i in range(1, len(ref_mutants) + 1)]
    counts = {}
    for m in ref_mutants:
        counts[m.operator] = counts.get(m.operator, 0) + 1
    # 2 arithmetic ops, 3 relational ops, 1 connective, 2 conditions, 5 constants x 2 variants
    assert counts == {"AOR": 2, "ROR": 3, "LCR": 1, "UOI": 2, "CR": 10}


def test_no_applicable_sites():
    program = parse_program("int f() { return 0; }")
    assert generate_mutants(program, "f", {"ROR"}) == []
    assert [m.description for m in generate_mutants(program, "f", {"CR"})] == ["0 → 1", "0 → -1"]


def test_deterministic(power_ref):
    first = [(m.id, m.operator, m.location, m.description, format_program(m.program))
             for m in generate_mutants(power_ref, "power")]
    again = [(m.id, m.operator, m.location, m.description, format_program(m.program))
             for m in generate_mutants(power_ref, "power")]
    assert first == again


def test_mutant_distinctness(power_ref, ref_mutants):
    keys = [(m.location, m.operator, m.description) for m in ref_mutants]
    assert len(set(keys)) == len(keys)
    original = format_program(power_ref).splitlines()
    for m in ref_mutants:
        changed = [i for i, (a, b) in enumerate(zip(original, format_program(m.program).splitlines()))
                   if a != b]
        assert len(changed) == 1, m.description


def test_only_the_function_under_test_is_mutated():
    program = parse_program(fixture_text("is_even_ref.mini"))
    for m in generate_mutants(program, "isEven"):
        assert m.program.function("half") == program.function("half")


@pytest.mark.parametrize("stem", ["abs", "divide", "max", "select", "is_even", "notes"])
def test_every_mutant_is_executable(stem):
    spec = parse_spec(fixture_text(f"{stem}.contract"))
    program = parse_program(fixture_text(f"{stem}_ref.mini"))
    args = tuple(True if p.type == "bool" else 3 for p in spec.signature.params)
    mutants = generate_mutants(program, spec.function)
    assert mutants
    for m in mutants:
        run_function(m.program, spec.function, args, fuel=10_000)


def test_full_suite_kills_everything(full_report):
    assert full_report.complete and full_report.score == 1
    assert full_report.total == 18
    assert {r.status for r in full_report.results} <= {KILLED, TIMEOUT}


def test_empty_suite_kills_nothing(power_ref, power_spec):
    report = mutation_score(power_ref, TestSuite("power"), power_spec)
    assert report.score == 0 and len(report.survivors) == report.total == 18


def test_thinned_suite_scores_lower(power_ref, power_spec):
    thin = parse_suite(fixture_text("power_one_per_sub.suite"))
    report = mutation_score(power_ref, thin, power_spec)
    assert report.score < 1
    assert [r.description for r in report.survivors] == ["0 → -1", "0 → -1"]


def test_kill_soundness(power_ref, power_spec, power_suite, ref_mutants, full_report):
    by_id = {m.id: m for m in ref_mutants}
    cases = {c.name: c for c in power_suite.cases}
    for r in full_report.results:
        outcome = run_test(by_id[r.id].program, cases[r.killed_by], power_spec)
        assert not outcome.passed
        assert (r.status == TIMEOUT) == (outcome.observed.as_record().get("kind") == "fuel_exhausted")


@settings(max_examples=25, deadline=None)
@given(st.sets(st.integers(0, 14), max_size=15), st.sets(st.integers(0, 14), max_size=15))
def test_suite_monotonicity(power_ref, power_spec, power_suite, a, b):
    def sub(indices):
        return TestSuite("power", tuple(c for i, c in enumerate(power_suite.cases) if i in indices))
    killed = lambda rep: {r.id for r in rep.results if r.status != SURVIVED}
    small = mutation_score(power_ref, sub(a), power_spec, {"ROR", "CR", "LCR"}, 5000)
    union = mutation_score(power_ref, sub(a | b), power_spec, {"ROR", "CR", "LCR"}, 5000)
    assert killed(small) <= killed(union)
    assert small.score <= union.score


def test_failing_baseline_is_rejected(power_naive, power_spec, power_suite):
    with pytest.raises(UsageError):
        mutation_score(power_naive, power_suite, power_spec)


def test_parse_operators():
    assert parse_operators("aor, ror") == {"AOR", "ROR"}
    assert parse_operators(",".join(sorted(DEFAULT_OPERATORS))) == DEFAULT_OPERATORS
    with pytest.raises(UsageError):
        parse_operators("XYZ")
    with pytest.raises(UsageError):
        parse_operators("")


def test_records_are_stable(full_report):
    summary = full_report.summary_record()
    assert summary["score"] == "1" and summary["complete"] is True
    assert full_report.results[0].as_record()["kind"] == "mutant"


def test_runtime_budget(power_ref, power_spec, power_suite):
    start = time.perf_counter()
    mutation_score(power_ref, power_suite, power_spec)
    assert time.perf_counter() - start < 30
