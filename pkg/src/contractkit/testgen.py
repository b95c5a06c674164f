"""Test suites: the ``.suite`` file format, generation from a contract, and linting.

Generation applies equivalence partitioning (every subcontract is a class)
and boundary value analysis: each comparison of a parameter against a
constant ``c`` in a precondition contributes ``c-1, c, c+1``.
"""

from __future__ import annotations

import itertools
import json
import logging
import random
import re
from dataclasses import dataclass, field

from contractkit.analysis import Domain
from contractkit.contract import (
    Specification, Var, atomic_comparisons, compile_predicate, constant_value,
)
from contractkit.contract.predicate import EvalFault
from contractkit.diagnostics import ParseError, UsageError, error
from contractkit.minilang.outcome import Outcome, Thrown, Value

log = logging.getLogger(__name__)

ORIGINS = ("boundary", "interior", "authored")
BOUNDARY_CAP = 64
MAX_ATTEMPTS = 10_000
DEFAULT_INTERIOR = 2
LINT_CODES = ("ONE_PER_SUB", "NO_BOUNDARY", "UNCOVERED_SUB")

_FLIP = {"<": ">", "<=": ">=", ">": "<", ">=": "<=", "==": "==", "!=": "!="}


class GenerationError(Exception):
    def __init__(self, subcontract: str, message: str):
        self.subcontract = subcontract
        super().__init__(message)


@dataclass(frozen=True)
class TestCase:
    __test__ = False  # not a pytest class

    name: str
    subcontract: str
    args: tuple
    origin: str = "authored"
    # a pinned expectation replaces the contract oracle for this case
    expect: Outcome | None = None

    def __post_init__(self):
        if self.origin not in ORIGINS:
            raise ValueError(f"unknown origin {self.origin!r}")
        if self.expect is not None and not isinstance(self.expect, (Value, Thrown)):
            raise ValueError("only values and exceptions can be expected")


@dataclass(frozen=True)
class TestSuite:
    __test__ = False

    function: str
    cases: tuple[TestCase, ...] = ()

    def __post_init__(self):
        seen = set()
        for case in self.cases:
            if case.name in seen:
                raise ValueError(f"duplicate test name {case.name!r}")
            seen.add(case.name)

    def for_subcontract(self, name: str) -> list[TestCase]:
        return [c for c in self.cases if c.subcontract == name]

    def without(self, names) -> "TestSuite":
        names = set(names)
        return TestSuite(self.function, tuple(c for c in self.cases if c.name not in names))


# -- boundary analysis

def normalize_comparison(comparison, spec: Specification | None = None):
    """``(lhs, op, rhs)`` as ``(param, op, constant)``, or None if it is not of that shape.

    Constants on the left are flipped to the right (``0 <= x`` becomes ``x >= 0``).
    """
    lhs, op, rhs = comparison
    int_params = None
    if spec is not None:
        int_params = {p.name for p in spec.signature.params if p.type == "int"}

    def is_param(node):
        return isinstance(node, Var) and (int_params is None or node.name in int_params)

    if is_param(lhs):
        c = rhs if isinstance(rhs, int) and not isinstance(rhs, bool) else constant_value(rhs)
        if c is not None:
            return lhs.name, op, c
    if is_param(rhs):
        c = constant_value(lhs)
        if c is not None:
            return rhs.name, _FLIP[op], c
    if isinstance(lhs, str) and isinstance(rhs, int):
        return lhs, op, rhs
    return None


def boundary_values(comparison, domain: Domain) -> list[int]:
    """``{c-1, c, c+1}`` clipped to the variable's interval, ascending.

    Comparisons whose right side is not a constant give no values (and a
    logged warning).
    """
    norm = normalize_comparison(comparison)
    if norm is None:
        log.warning("comparison %s has no constant side; no boundary values", _show(comparison))
        return []
    var, _op, c = norm
    lo, hi = domain.interval(var)
    return [v for v in (c - 1, c, c + 1) if lo <= v <= hi]


def _show(comparison) -> str:
    from contractkit.contract import format_predicate
    lhs, op, rhs = comparison
    fmt = lambda n: n if isinstance(n, (str, int)) else format_predicate(n)
    return f"{fmt(lhs)} {op} {fmt(rhs)}"


def relational_comparisons(spec: Specification) -> list[tuple[str, str]]:
    """(subcontract, comparison text) for precondition comparisons that yield no boundaries."""
    out = []
    bool_params = {p.name for p in spec.signature.params if p.type == "bool"}
    for sub in spec.subcontracts:
        for comp in atomic_comparisons(sub.requires):
            if normalize_comparison(comp, spec) is None and not _is_bool_comparison(comp, bool_params):
                out.append((sub.name, _show(comp)))
    return out


def _is_bool_comparison(comp, bool_params) -> bool:
    lhs, _, rhs = comp
    return any(isinstance(n, Var) and n.name in bool_params for n in (lhs, rhs))


def subcontract_boundaries(spec: Specification, sub, domain: Domain) -> dict[str, set[int]]:
    out: dict[str, set[int]] = {}
    for comp in atomic_comparisons(sub.requires):
        norm = normalize_comparison(comp, spec)
        if norm is None:
            continue
        out.setdefault(norm[0], set()).update(boundary_values(norm, domain))
    return out


# -- generation

def _slug(name: str) -> str:
    slug = re.sub(r"[^0-9A-Za-z]+", "_", name).strip("_").lower()
    if not slug or slug[0].isdigit():
        slug = "sub_" + slug
    return slug


def _selector(spec: Specification, domain: Domain):
    checks = [compile_predicate(s.requires, domain.names) for s in spec.subcontracts]

    def holds(i, point):
        try:
            return bool(checks[i](point))
        except EvalFault:
            return False

    def only(i, point):
        return holds(i, point) and not any(holds(j, point) for j in range(len(checks)) if j != i)
    return only


def _nearest_zero(lo: int, hi: int) -> int:
    return min(max(0, lo), hi)


def generate_suite(spec: Specification, domain: Domain, interior_per_sub: int = DEFAULT_INTERIOR,
                   seed: int = 0) -> TestSuite:
    """Derive a suite with boundary and pseudo-random interior cases per subcontract.

    Every case satisfies its own subcontract's precondition and no other.
    Raises GenerationError naming a subcontract for which no such input
    exists in ``domain``.
    """
    if interior_per_sub < 1:
        raise UsageError("interior_per_sub must be at least 1")
    if domain.names != spec.signature.param_names:
        raise UsageError("domain parameters do not match the signature")
    only = _selector(spec, domain)
    rng = random.Random(seed)
    cases: list[TestCase] = []
    used_slugs: set[str] = set()
    for index, sub in enumerate(spec.subcontracts):
        slug = _slug(sub.name)
        if slug in used_slugs:
            slug = f"{slug}_{index + 1}"
        used_slugs.add(slug)

        boundary: list[tuple] = []
        per_param = subcontract_boundaries(spec, sub, domain)
        if per_param:
            axes = []
            for name, ptype in zip(domain.names, domain.types):
                if ptype == "bool":
                    axes.append([False, True])
                elif per_param.get(name):
                    axes.append(sorted(per_param[name]))
                else:
                    axes.append([_nearest_zero(*domain.interval(name))])
            for point in itertools.product(*axes):
                if only(index, point):
                    boundary.append(point)
                    if len(boundary) == BOUNDARY_CAP:
                        break

        interior: list[tuple] = []
        for _ in range(MAX_ATTEMPTS):
            point = tuple(rng.choice((False, True)) if t == "bool" else rng.randint(*b)
                          for t, b in zip(domain.types, domain.bounds))
            if only(index, point):
                interior.append(point)
                if len(interior) == interior_per_sub:
                    break

        if not boundary and not interior:
            raise GenerationError(
                sub.name, f"precondition of subcontract {sub.name!r} is unsatisfiable "
                          f"(exclusively) within {domain.describe()}")
        for k, point in enumerate(sorted(boundary), 1):
            cases.append(TestCase(f"{slug}_b{k}", sub.name, point, "boundary"))
        for k, point in enumerate(sorted(interior), 1):
            cases.append(TestCase(f"{slug}_i{k}", sub.name, point, "interior"))
    return TestSuite(spec.function, tuple(cases))


# -- linting

@dataclass(frozen=True)
class LintWarning:
    code: str
    subcontract: str
    message: str

    def __post_init__(self):
        if self.code not in LINT_CODES:
            raise ValueError(f"unknown lint code {self.code!r}")

    def as_record(self) -> dict:
        return {"kind": "lint", "code": self.code, "subcontract": self.subcontract,
                "message": self.message}


@dataclass(frozen=True)
class LintReport:
    warnings: tuple[LintWarning, ...] = field(default=())

    def codes(self) -> list[tuple[str, str]]:
        return [(w.code, w.subcontract) for w in self.warnings]

    def __bool__(self) -> bool:
        return bool(self.warnings)


def lint_suite(suite: TestSuite, spec: Specification, domain: Domain) -> LintReport:
    if suite.function != spec.function:
        raise UsageError(f"suite tests {suite.function!r}, contract describes {spec.function!r}")
    out = []
    for sub in spec.subcontracts:
        cases = suite.for_subcontract(sub.name)
        if not cases:
            out.append(LintWarning("UNCOVERED_SUB", sub.name,
                                   f"no test case exercises subcontract {sub.name!r}"))
            continue
        if len(cases) == 1:
            out.append(LintWarning("ONE_PER_SUB", sub.name,
                                   f"subcontract {sub.name!r} has a single test case"))
        bounds = subcontract_boundaries(spec, sub, domain)
        if any(bounds.values()):
            index = {n: i for i, n in enumerate(spec.signature.param_names)}
            hit = any(len(c.args) == len(index) and c.args[index[var]] in values
                      for c in cases for var, values in bounds.items())
            if not hit:
                shown = ", ".join(f"{v} in {sorted(vals)}" for v, vals in sorted(bounds.items()))
                out.append(LintWarning("NO_BOUNDARY", sub.name,
                                       f"no case of {sub.name!r} sits on a boundary ({shown})"))
    return LintReport(tuple(out))


# -- the .suite file format

def _fmt_value(v) -> str:
    if v is True:
        return "true"
    if v is False:
        return "false"
    return str(v)


def format_suite(suite: TestSuite) -> str:
    lines = [f"suite {suite.function}"]
    for c in suite.cases:
        args = ", ".join(_fmt_value(v) for v in c.args)
        line = (f"test {c.name} sub {json.dumps(c.subcontract, ensure_ascii=False)} "
                f"args ({args}) origin {c.origin}")
        if isinstance(c.expect, Value):
            line += f" expect {_fmt_value(c.expect.value)}"
        elif isinstance(c.expect, Thrown):
            line += f" expect throws {c.expect.exception}"
        lines.append(line)
    return "\n".join(lines) + "\n"


_SUITE_TOKEN = re.compile(r'\s*(?:(?P<str>"(?:[^"\\]|\\.)*")|(?P<int>-?\d+)|(?P<ident>[A-Za-z_]\w*)'
                          r'|(?P<punct>[(),]))')


def _suite_tokens(line: str, lineno: int):
    pos = 0
    out = []
    while pos < len(line):
        if line[pos:].strip() == "":
            break
        m = _SUITE_TOKEN.match(line, pos)
        if m is None:
            col = pos + len(line[pos:]) - len(line[pos:].lstrip()) + 1
            raise ParseError([error("E201", lineno, col, f"unexpected text {line[col - 1:]!r}")])
        kind = m.lastgroup
        out.append((kind, m.group(kind), m.start(kind) + 1))
        pos = m.end()
    return out


def parse_suite(text: str) -> TestSuite:
    """Read a ``.suite`` file. Raises ParseError with E201/E202 diagnostics."""
    function = None
    cases: list[TestCase] = []
    seen: set[str] = set()
    for lineno, raw in enumerate(text.splitlines(), 1):
        stripped = raw.strip()
        if not stripped or stripped.startswith("#"):
            continue
        toks = _suite_tokens(raw, lineno)
        it = _Cursor(toks, lineno, len(raw) + 1)
        head = it.word()
        if head == "suite":
            if function is not None:
                it.fail("duplicate suite header", toks[0][2])
            function = it.ident()
            it.end()
            continue
        if head != "test":
            it.fail(f"expected 'suite' or 'test', found {head!r}", toks[0][2])
        if function is None:
            it.fail("test before the 'suite <function>' header", toks[0][2])
        name_col = it.col()
        name = it.ident()
        if name in seen:
            raise ParseError([error("E202", lineno, name_col, f"duplicate test name {name!r}")])
        seen.add(name)
        it.keyword("sub")
        sub = it.string()
        it.keyword("args")
        args = it.values()
        origin = "authored"
        expect = None
        done = set()
        while not it.at_end():
            col = it.col()
            word = it.word()
            if word in done:
                it.fail(f"duplicate {word!r} clause", col)
            done.add(word)
            if word == "origin":
                origin = it.ident()
                if origin not in ORIGINS:
                    it.fail(f"unknown origin {origin!r}", col)
            elif word == "expect":
                if it.peek_word() == "throws":
                    it.word()
                    expect = Thrown(it.ident())
                else:
                    expect = Value(it.value())
            else:
                it.fail(f"unexpected {word!r}", col)
        cases.append(TestCase(name, sub, args, origin, expect))
    if function is None:
        raise ParseError([error("E201", 1, 1, "missing 'suite <function>' header")])
    return TestSuite(function, tuple(cases))


class _Cursor:
    def __init__(self, toks, lineno, eol):
        self.toks = toks
        self.i = 0
        self.lineno = lineno
        self.eol = eol

    def fail(self, message, col=None):
        raise ParseError([error("E201", self.lineno, col or self.col(), message)])

    def col(self):
        return self.toks[self.i][2] if self.i < len(self.toks) else self.eol

    def at_end(self):
        return self.i >= len(self.toks)

    def end(self):
        if not self.at_end():
            self.fail(f"unexpected {self.toks[self.i][1]!r}")

    def take(self, kind, what):
        if self.at_end() or self.toks[self.i][0] != kind:
            found = "end of line" if self.at_end() else repr(self.toks[self.i][1])
            self.fail(f"expected {what}, found {found}")
        tok = self.toks[self.i]
        self.i += 1
        return tok[1]

    def word(self):
        return self.take("ident", "a keyword")

    def peek_word(self):
        if not self.at_end() and self.toks[self.i][0] == "ident":
            return self.toks[self.i][1]
        return None

    def ident(self):
        return self.take("ident", "an identifier")

    def keyword(self, kw):
        col = self.col()
        if self.word() != kw:
            self.fail(f"expected {kw!r}", col)

    def string(self):
        return json.loads(self.take("str", "a quoted subcontract name"))

    def value(self):
        if not self.at_end() and self.toks[self.i][0] == "int":
            return int(self.take("int", "a value"))
        col = self.col()
        word = self.take("ident", "a value")
        if word not in ("true", "false"):
            self.fail(f"expected a value, found {word!r}", col)
        return word == "true"

    def values(self):
        self.take("punct", "'('")
        out = []
        if not self.at_end() and self.toks[self.i][1] == ")":
            self.i += 1
            return tuple(out)
        while True:
            out.append(self.value())
            sep = self.take("punct", "',' or ')'")
            if sep == ")":
                return tuple(out)
            if sep != ",":
                self.fail("expected ',' or ')'")
