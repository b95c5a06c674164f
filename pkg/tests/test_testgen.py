import itertools
import logging

import pytest
from hypothesis import given, settings, strategies as st

from contractkit.analysis import parse_domain
from contractkit.contract import Var, eval_predicate, parse_spec, atomic_comparisons
from contractkit.diagnostics import ParseError
from contractkit.minilang import Thrown, Value
from contractkit.testgen import (
    GenerationError, TestCase, TestSuite, boundary_values, format_suite, generate_suite,
    lint_suite, normalize_comparison, parse_suite, relational_comparisons, subcontract_boundaries,
)

from conftest import fixture_text


def make_domain(spec, text):
    return parse_domain(spec.signature, text)


# -- boundary_values

@pytest.mark.parametrize("comparison, interval, expected", [
    (("x", ">=", 0), (-100, 100), [-1, 0, 1]),
    (("y", "<", 0), (0, 100), [0, 1]),
    (("x", "==", 0), (-100, 100), [-1, 0, 1]),
    (("x", "<", 100), (-100, 100), [99, 100]),
])
def test_boundary_value_examples(power_spec, comparison, interval, expected):
    domain = make_domain(power_spec, f"{interval[0]}..{interval[1]}")
    assert boundary_values(comparison, domain) == expected


def test_boundary_values_from_ast(power_spec):
    domain = make_domain(power_spec, "-8..8")
    (comp,) = atomic_comparisons(parse_spec(
        "@sub A { @requires 3 < x; @ensures true; }\nint f(int x, int y)").subcontracts[0].requires)
    assert normalize_comparison(comp) == ("x", ">", 3)
    assert boundary_values(comp, domain) == [2, 3, 4]


def test_relational_comparison_gives_no_boundaries(caplog, power_spec):
    domain = make_domain(power_spec, "-8..8")
    with caplog.at_level(logging.WARNING):
        assert boundary_values((Var("x"), "<", Var("y")), domain) == []
    assert "no constant side" in caplog.text
    spec = parse_spec(fixture_text("max.contract"))
    assert relational_comparisons(spec) == [("First", "a >= b"), ("Second", "a < b")]


# -- generate_suite

def test_power_suite_contents(power_suite):
    zero = power_suite.for_subcontract("Zero")
    assert any(c.args == (0, 0) for c in zero)
    happy_args = {c.args for c in power_suite.for_subcontract("Happy path")}
    assert {(0, 1), (1, 0)} <= happy_args


def test_seed_zero_suite_is_the_teacher_fixture(power_suite):
    assert format_suite(power_suite) == fixture_text("power_teacher.suite")


def test_boundary_cases_come_first_and_are_sorted(power_suite):
    for sub in ("Happy path", "Zero", "Negative"):
        cases = power_suite.for_subcontract(sub)
        origins = [c.origin for c in cases]
        assert origins == sorted(origins)  # boundary < interior
        for origin in ("boundary", "interior"):
            args = [c.args for c in cases if c.origin == origin]
            assert args == sorted(args)
        assert sum(c.origin == "interior" for c in cases) == 2


@pytest.mark.parametrize("seed", [0, 1, 7, 12345])
def test_seed_determinism(power_spec, small_domain, seed):
    texts = {format_suite(generate_suite(power_spec, small_domain, 2, seed)) for _ in range(3)}
    assert len(texts) == 1


def test_unsatisfiable_subcontract_raises():
    spec = parse_spec(fixture_text("abs.contract"))
    with pytest.raises(GenerationError) as info:
        generate_suite(spec, make_domain(spec, "-8..8"))
    assert info.value.subcontract == "Minimum"


def test_bool_parameters():
    spec = parse_spec(fixture_text("select.contract"))
    suite = generate_suite(spec, make_domain(spec, "-8..8"), 2, 3)
    assert all(isinstance(c.args[0], bool) for c in suite.cases)
    assert {c.subcontract for c in suite.cases} == {s.name for s in spec.subcontracts}


def _well_formed(spec, suite):
    names = spec.signature.param_names
    for case in suite.cases:
        env = dict(zip(names, case.args))
        holding = [s.name for s in spec.subcontracts if eval_predicate(s.requires, env)]
        assert holding == [case.subcontract], case


@pytest.mark.parametrize("name", ["power.contract", "max.contract", "divide.contract",
                                  "is_even.contract", "select.contract"])
def test_generated_cases_select_exactly_their_subcontract(name):
    spec = parse_spec(fixture_text(name))
    _well_formed(spec, generate_suite(spec, make_domain(spec, "-8..8"), 3, 11))


comparison = st.tuples(st.sampled_from("xy"), st.sampled_from(["<", "<=", ">", ">=", "==", "!="]),
                       st.integers(-6, 6)).map(lambda t: f"{t[0]} {t[1]} {t[2]}")


@settings(max_examples=80, deadline=None)
@given(st.lists(st.lists(comparison, min_size=1, max_size=2).map(" && ".join), min_size=1,
                max_size=3, unique=True),
       st.integers(0, 50))
def test_random_specs_well_formed_and_boundary_inclusive(clauses, seed):
    body = "\n".join(f"@sub S{i} {{ @requires {c}; @ensures true; }}" for i, c in enumerate(clauses))
    spec = parse_spec(body + "\nint f(int x, int y)")
    domain = make_domain(spec, "-8..8")
    try:
        suite = generate_suite(spec, domain, 2, seed)
    except GenerationError as exc:
        # only legitimate when no exclusive witness exists anywhere in the domain
        index = [s.name for s in spec.subcontracts].index(exc.subcontract)
        assert all(_holding(spec, p) != [index] for p in domain.points())
        return
    _well_formed(spec, suite)
    # boundary inclusion: when the boundary grid holds an exclusive witness whose
    # compared variable sits on {c-1, c, c+1}, some case of the subcontract does too
    for index, sub in enumerate(spec.subcontracts):
        bounds = subcontract_boundaries(spec, sub, domain)
        axes = [sorted(bounds[n]) if bounds.get(n) else [0] for n in ("x", "y")]
        exclusive = [p for p in itertools.product(*axes) if _holding(spec, p) == [index]]
        cases = suite.for_subcontract(sub.name)
        for comp in atomic_comparisons(sub.requires):
            var, _, _ = normalize_comparison(comp)
            pos = ("x", "y").index(var)
            values = set(boundary_values(comp, domain))
            if any(p[pos] in values for p in exclusive):
                assert any(c.args[pos] in values for c in cases), (sub.name, comp)


def _holding(spec, point):
    env = dict(zip(("x", "y"), point))
    return [i for i, s in enumerate(spec.subcontracts) if eval_predicate(s.requires, env)]


# -- lint_suite

def test_full_suite_has_no_lints(power_spec, power_suite, small_domain):
    assert not lint_suite(power_suite, power_spec, small_domain)


def test_one_case_per_subcontract(power_spec, small_domain):
    suite = parse_suite(fixture_text("power_one_per_sub.suite"))
    report = lint_suite(suite, power_spec, small_domain)
    assert report.codes() == [
        ("ONE_PER_SUB", "Happy path"), ("NO_BOUNDARY", "Happy path"),
        ("ONE_PER_SUB", "Zero"),
        ("ONE_PER_SUB", "Negative"), ("NO_BOUNDARY", "Negative")]


def _lint_oracle(suite, spec, domain):
    """Hand restatement of the three lint rules."""
    out = []
    for sub in spec.subcontracts:
        cases = [c for c in suite.cases if c.subcontract == sub.name]
        if not cases:
            out.append(("UNCOVERED_SUB", sub.name))
            continue
        if len(cases) == 1:
            out.append(("ONE_PER_SUB", sub.name))
        targets = []
        for comp in atomic_comparisons(sub.requires):
            norm = normalize_comparison(comp)
            if norm:
                var = norm[0]
                targets += [(var, v) for v in boundary_values(norm, domain)]
        names = spec.signature.param_names
        if targets and not any(c.args[names.index(v)] == val for c in cases for v, val in targets):
            out.append(("NO_BOUNDARY", sub.name))
    return out


def test_lint_matches_oracle_on_thinned_suites(power_spec, power_suite, small_domain):
    names = [c.name for c in power_suite.cases]
    for r in range(0, 4):
        for dropped in itertools.combinations(names, r * 4):
            thinned = power_suite.without(dropped)
            assert lint_suite(thinned, power_spec, small_domain).codes() == \
                _lint_oracle(thinned, power_spec, small_domain)


def test_missing_negative_cases(power_spec, power_suite, small_domain):
    thinned = power_suite.without(c.name for c in power_suite.for_subcontract("Negative"))
    assert ("UNCOVERED_SUB", "Negative") in lint_suite(thinned, power_spec, small_domain).codes()


# -- the .suite format

def test_format_parse_round_trip(power_suite):
    assert parse_suite(format_suite(power_suite)) == power_suite


def test_pinned_expectations_parse():
    suite = parse_suite(fixture_text("power_pinned_zero.suite"))
    assert suite.cases[0].expect == Value(0)
    assert suite.cases[3].expect == Thrown("IllegalArgumentException")
    assert parse_suite(format_suite(suite)) == suite


def test_subcontract_names_with_quotes_round_trip():
    suite = TestSuite("f", (TestCase("t1", 'odd "name"', (1, True, -3)),))
    assert parse_suite(format_suite(suite)) == suite


@pytest.mark.parametrize("text, code", [
    ("test a sub \"X\" args (1)", "E201"),
    ("suite f\ntest a sub X args (1)", "E201"),
    ("suite f\ntest a sub \"X\" args (1) origin nowhere", "E201"),
    ("suite f\ntest a sub \"X\" args (1) %", "E201"),
    ("suite f\ntest a sub \"X\" args (1)\ntest a sub \"X\" args (2)", "E202"),
    ("", "E201"),
])
def test_suite_errors(text, code):
    with pytest.raises(ParseError) as info:
        parse_suite(text)
    assert info.value.diagnostics[0].code == code
