from __future__ import annotations

from pathlib import Path

import pytest

from contractkit.analysis import parse_domain
from contractkit.contract import parse_spec
from contractkit.minilang import parse_program
from contractkit.testgen import generate_suite, parse_suite

FIXTURES = Path(__file__).resolve().parents[1] / "src" / "contractkit" / "fixtures"


def fixture_text(name: str) -> str:
    return (FIXTURES / name).read_text(encoding="utf-8")


@pytest.fixture(scope="session")
def fixtures_dir() -> Path:
    return FIXTURES


@pytest.fixture(scope="session")
def power_spec():
    return parse_spec(fixture_text("power.contract"))


@pytest.fixture(scope="session")
def power_ref():
    return parse_program(fixture_text("power_ref.mini"))


@pytest.fixture(scope="session")
def power_naive():
    return parse_program(fixture_text("power_naive.mini"))


@pytest.fixture(scope="session")
def power_zero_wrong():
    return parse_program(fixture_text("power_zero_wrong.mini"))


@pytest.fixture(scope="session")
def small_domain(power_spec):
    return parse_domain(power_spec.signature, "-8..8")


@pytest.fixture(scope="session")
def power_suite(power_spec, small_domain):
    return generate_suite(power_spec, small_domain, 2, 0)


@pytest.fixture(scope="session")
def teacher_suite():
    return parse_suite(fixture_text("power_teacher.suite"))
