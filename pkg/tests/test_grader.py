from fractions import Fraction as F

import pytest
from hypothesis import given, strategies as st

from contractkit.diagnostics import ParseError, UsageError
from contractkit.grader import (
    ABSENT, INVALID_FAILS_REFERENCE, INVALID_PASSES_BROKEN, VALID, AssignmentBundle, BundleError,
    Submission, SubmissionReport, cohort_stats, grade_submission, load_bundle, load_submission,
    parse_manifest,
)
from contractkit.minilang import parse_program
from contractkit.mutation import mutation_score
from contractkit.testgen import TestSuite, parse_suite

from conftest import FIXTURES, fixture_text


@pytest.fixture(scope="module")
def bundle():
    return load_bundle(FIXTURES / "power.bundle")


def test_bundle_loads_and_validates(bundle):
    assert bundle.spec.function == "power"
    assert bundle.broken_names == ("power_naive.mini", "power_zero_wrong.mini")
    assert bundle.domain.interval("x") == (-8, 8)


def test_reference_submission(bundle, power_ref, power_suite):
    report = grade_submission(bundle, Submission("ref", power_ref, power_suite))
    assert (report.correctness, report.test_validity, report.completeness) == (1, VALID, 1)


def test_self_grading_identity(bundle):
    report = grade_submission(bundle, Submission("self", bundle.reference, bundle.teacher_suite))
    expected = mutation_score(bundle.reference, bundle.teacher_suite, bundle.spec).score
    assert (report.correctness, report.test_validity, report.completeness) == (1, VALID, expected)


def test_naive_without_tests(bundle, power_naive):
    report = grade_submission(bundle, Submission("naive", power_naive))
    assert report.correctness == F(8, 15)
    assert report.test_validity == ABSENT and report.completeness is None
    assert not report.testing


def test_suite_written_against_wrong_impl(bundle, power_zero_wrong):
    suite = parse_suite(fixture_text("power_pinned_zero.suite"))
    report = grade_submission(bundle, Submission("zw", power_zero_wrong, suite))
    assert report.test_validity == INVALID_FAILS_REFERENCE
    assert report.completeness is None
    assert report.correctness == F(12, 15)  # fails the three Zero cases


def test_suite_that_catches_no_broken_impl(bundle, power_ref):
    weak = parse_suite('suite power\ntest a sub "Happy path" args (2, 3)\n')
    report = grade_submission(bundle, Submission("weak", power_ref, weak))
    assert report.test_validity == INVALID_PASSES_BROKEN and report.completeness is None


def test_empty_suite_is_not_valid(bundle, power_ref):
    report = grade_submission(bundle, Submission("empty", power_ref, TestSuite("power")))
    assert report.test_validity == INVALID_PASSES_BROKEN
    assert [c for c, _ in report.lints.codes()] == ["UNCOVERED_SUB"] * 3


def test_missing_function(bundle):
    with pytest.raises(UsageError):
        grade_submission(bundle, Submission("x", parse_program("int f() { return 1; }")))


def test_bundle_validation_rejects_bad_broken(bundle):
    fake = AssignmentBundle(bundle.spec, bundle.reference, (bundle.reference,),
                            bundle.teacher_suite, bundle.domain)
    with pytest.raises(BundleError):
        fake.validate()
    wrong_ref = AssignmentBundle(bundle.spec, bundle.broken[0], bundle.broken,
                                 bundle.teacher_suite, bundle.domain)
    with pytest.raises(BundleError):
        wrong_ref.validate()


@pytest.mark.parametrize("text", ["contract power.contract", "colour = red\ncontract = a",
                                  "contract = a\ncontract = b", "contract = a"])
def test_manifest_errors(text):
    with pytest.raises(ParseError) as info:
        parse_manifest(text)
    assert info.value.diagnostics[0].code == "E301"


def test_load_submission(tmp_path, power_ref):
    (tmp_path / "alice").mkdir()
    (tmp_path / "alice" / "impl.mini").write_text(fixture_text("power_ref.mini"))
    sub = load_submission(tmp_path / "alice")
    assert sub.id == "alice" and sub.suite is None and sub.impl == power_ref
    (tmp_path / "alice" / "other.mini").write_text("")
    with pytest.raises(UsageError):
        load_submission(tmp_path / "alice")


# -- cohort statistics

def rep(id_, correctness, completeness=None, validity=None):
    validity = validity or (VALID if completeness is not None else ABSENT)
    return SubmissionReport(id_, F(correctness), validity,
                            None if completeness is None else F(completeness))


def test_average_and_median_examples():
    stats = cohort_stats([rep("a", 1), rep("b", 1), rep("c", F(1, 2)), rep("d", F(1, 2))])
    assert stats.correctness.average == F(3, 4) and stats.correctness.median == F(3, 4)
    single = cohort_stats([rep("solo", F(2, 3))])
    assert single.correctness.average == single.correctness.median == F(2, 3)


def test_completeness_excludes_non_testing():
    stats = cohort_stats([rep("a", 1, "0.81"), rep("b", 1, 1), rep("c", F(1, 2), 1), rep("d", 0)])
    assert (stats.testing, stats.non_testing) == (3, 1)
    assert stats.completeness.n == 3
    assert stats.completeness.average == (F("0.81") + 2) / 3
    assert stats.completeness.median == 1
    assert stats.correctness_non_testing.average == 0


def test_invalid_suites_count_as_testing_without_completeness():
    stats = cohort_stats([rep("a", 1, validity=INVALID_FAILS_REFERENCE), rep("b", 1, 1)])
    assert stats.testing == 2 and stats.completeness.n == 1


def test_empty_cohort():
    with pytest.raises(UsageError):
        cohort_stats([])


def sorted_median(values):
    s = sorted(values)
    n = len(s)
    return s[n // 2] if n % 2 else (s[n // 2 - 1] + s[n // 2]) / 2


fractions = st.fractions(min_value=0, max_value=1, max_denominator=50)


@given(st.lists(st.tuples(fractions, st.one_of(st.none(), fractions)), min_size=1, max_size=12))
def test_stats_match_sort_oracle(rows):
    reports = [rep(f"s{i:02d}", c, m) for i, (c, m) in enumerate(rows)]
    stats = cohort_stats(list(reversed(reports)))
    corr = [c for c, _ in rows]
    assert stats.correctness.average == sum(corr) / len(corr)
    assert stats.correctness.median == sorted_median(corr)
    comp = [m for _, m in rows if m is not None]
    if comp:
        assert stats.completeness.median == sorted_median(comp)
        assert stats.completeness.average == sum(comp) / len(comp)
    else:
        assert stats.completeness.n == 0 and stats.completeness.average is None
    assert stats.as_record() == cohort_stats(reports).as_record()  # order-independent
