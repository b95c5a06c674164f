"""First-order mutation of the function under test, and the mutation score of a suite.

Operators:

    AOR  arithmetic operator replacement   + <-> -, * <-> /
    ROR  relational operator replacement   < <-> <=, > <-> >=, == <-> !=
    LCR  logical connector replacement     && <-> ||
    UOI  condition negation                if/while (c) -> (!(c))
    CR   integer constant replacement      c -> c+1, c-1, 0, 1 (no-ops dropped)

A suite is complete for a program when every mutant fails at least one of
its cases.
"""

from __future__ import annotations

from dataclasses import dataclass, fields, is_dataclass, replace
from fractions import Fraction

from contractkit import int64
from contractkit.contract import Specification
from contractkit.contract.model import Param
from contractkit.diagnostics import UsageError
from contractkit.minilang import DEFAULT_FUEL, Fault, Program
from contractkit.minilang.ast import BinOp, FunctionDef, If, Lit, UnaryOp, While
from contractkit.minilang.compiler import compile_program
from contractkit.minilang.format import format_expr
from contractkit.runner import Oracle, run_suite, run_test
from contractkit.testgen import TestSuite

OPERATORS = ("AOR", "ROR", "LCR", "UOI", "CR")
DEFAULT_OPERATORS = frozenset(OPERATORS)

_AOR = {"+": "-", "-": "+", "*": "/", "/": "*"}
_ROR = {"<": "<=", "<=": "<", ">": ">=", ">=": ">", "==": "!=", "!=": "=="}
_LCR = {"&&": "||", "||": "&&"}

KILLED, TIMEOUT, SURVIVED = "killed", "killed_by_timeout", "survived"


def parse_operators(text: str) -> frozenset[str]:
    ops = frozenset(t.strip().upper() for t in text.split(",") if t.strip())
    unknown = ops - DEFAULT_OPERATORS
    if unknown:
        raise UsageError(f"unknown mutation operator {sorted(unknown)[0]!r}; "
                         f"choose from {', '.join(OPERATORS)}")
    if not ops:
        raise UsageError("no mutation operators selected")
    return ops


@dataclass(frozen=True)
class Mutant:
    id: str
    operator: str
    location: tuple[int, int]
    description: str
    program: Program


def _children(node):
    for f in fields(node):
        if f.name in ("pos", "warnings", "_compiled"):
            continue
        value = getattr(node, f.name)
        if isinstance(value, tuple):
            for i, item in enumerate(value):
                if is_dataclass(item) and not isinstance(item, Param):
                    yield (f.name, i), item
        elif is_dataclass(value) and not isinstance(value, Param):
            yield (f.name, None), value


def _sites(node, path=()):
    yield path, node
    for step, child in _children(node):
        yield from _sites(child, path + (step,))


def _replace_at(node, path, new):
    if not path:
        return new
    (name, index), rest = path[0], path[1:]
    child = getattr(node, name)
    if index is None:
        return replace(node, **{name: _replace_at(child, rest, new)})
    items = list(child)
    items[index] = _replace_at(items[index], rest, new)
    return replace(node, **{name: tuple(items)})


def _candidates(node, operators):
    """Yield (operator, location, description, replacement node) for one site."""
    if isinstance(node, BinOp):
        for code, table in (("AOR", _AOR), ("ROR", _ROR), ("LCR", _LCR)):
            if code in operators and node.op in table:
                yield code, node.pos, f"{node.op} → {table[node.op]}", replace(node, op=table[node.op])
    if isinstance(node, Lit) and "CR" in operators and not isinstance(node.value, bool):
        c = node.value
        seen = {c}
        for v in (c + 1, c - 1, 0, 1):
            if v in seen or not int64.fits(v):
                continue
            seen.add(v)
            yield "CR", node.pos, f"{c} → {v}", replace(node, value=v)
    if isinstance(node, (If, While)) and "UOI" in operators:
        cond = node.cond
        negated = UnaryOp("!", cond, cond.pos)
        yield ("UOI", node.pos, f"{format_expr(cond)} → {format_expr(negated)}",
               replace(node, cond=negated))


def generate_mutants(program: Program, function: str,
                     operators=DEFAULT_OPERATORS) -> list[Mutant]:
    """All first-order mutants of ``function``, ordered by source position then operator."""
    operators = frozenset(operators)
    unknown = operators - DEFAULT_OPERATORS
    if unknown:
        raise UsageError(f"unknown mutation operator {sorted(unknown)[0]!r}")
    try:
        fn = program.function(function)
    except KeyError:
        raise UsageError(f"program does not define {function!r}") from None
    found = []
    for path, node in _sites(fn):
        for order, (code, loc, desc, new_node) in enumerate(_candidates(node, operators)):
            if new_node == node:
                continue
            found.append(((tuple(loc), code, order), code, loc, desc, path, new_node))
    found.sort(key=lambda item: item[0])
    mutants = []
    for _, code, loc, desc, path, new_node in found:
        mutated_fn: FunctionDef = _replace_at(fn, path, new_node)
        mutated = program.replace_function(mutated_fn)
        table, diags = compile_program(mutated)
        if diags:
            continue  # the operator produced an ill-typed program; not a legal mutant
        object.__setattr__(mutated, "_compiled", table)
        mutants.append(Mutant(f"M{len(mutants) + 1}", code, tuple(loc), desc, mutated))
    return mutants


@dataclass(frozen=True)
class MutantResult:
    id: str
    operator: str
    location: tuple[int, int]
    description: str
    status: str
    killed_by: str | None = None

    def as_record(self) -> dict:
        return {"kind": "mutant", "id": self.id, "operator": self.operator,
                "line": self.location[0], "column": self.location[1],
                "description": self.description, "status": self.status,
                "killed_by": self.killed_by}


@dataclass(frozen=True)
class MutationReport:
    results: tuple[MutantResult, ...]

    @property
    def total(self) -> int:
        return len(self.results)

    @property
    def killed(self) -> int:
        return sum(r.status != SURVIVED for r in self.results)

    @property
    def timeouts(self) -> int:
        return sum(r.status == TIMEOUT for r in self.results)

    @property
    def survivors(self) -> list[MutantResult]:
        return [r for r in self.results if r.status == SURVIVED]

    @property
    def score(self) -> Fraction:
        if not self.results:
            return Fraction(1)
        return Fraction(self.killed, self.total)

    @property
    def complete(self) -> bool:
        return not self.survivors

    def summary_record(self) -> dict:
        return {"kind": "mutation_summary", "total": self.total, "killed": self.killed,
                "killed_by_timeout": self.timeouts, "survived": len(self.survivors),
                "score": str(self.score), "complete": self.complete}


def kill_mutant(mutant: Mutant, suite: TestSuite, spec: Specification, fuel: int,
                oracle: Oracle | None = None) -> MutantResult:
    oracle = oracle or Oracle(spec)
    for case in suite.cases:
        result = run_test(mutant.program, case, spec, fuel, oracle)
        if not result.passed:
            timed_out = result.observed == Fault("fuel_exhausted")
            return MutantResult(mutant.id, mutant.operator, mutant.location, mutant.description,
                                TIMEOUT if timed_out else KILLED, case.name)
    return MutantResult(mutant.id, mutant.operator, mutant.location, mutant.description, SURVIVED)


def mutation_score(program: Program, suite: TestSuite, spec: Specification,
                   operators=DEFAULT_OPERATORS, fuel: int = DEFAULT_FUEL) -> MutationReport:
    """Run every mutant of the function under test against ``suite``.

    The unmutated program must pass the whole suite first; otherwise a
    failing case says nothing about the mutants and UsageError is raised.
    """
    baseline = run_suite(program, suite, spec, fuel)
    if baseline.pass_fraction != 1:
        failing = [r.case for r in baseline.results if not r.passed]
        raise UsageError(
            "the unmutated implementation fails the suite (" + ", ".join(failing[:5])
            + "); mutants can only be judged by a suite the correct implementation passes")
    oracle = Oracle(spec)
    mutants = generate_mutants(program, spec.function, operators)
    return MutationReport(tuple(kill_mutant(m, suite, spec, fuel, oracle) for m in mutants))
