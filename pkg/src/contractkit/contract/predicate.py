"""Predicate expressions used as preconditions and postcondition oracles."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterator, Mapping, Union

from contractkit import int64

RESULT = "\\result"

COMPARISONS = ("==", "!=", "<", "<=", ">", ">=")
ARITHMETIC = ("+", "-", "*", "/", "^")
CONNECTIVES = ("&&", "||")

# binding strength, loosest first
PRECEDENCE = {
    "||": 1,
    "&&": 2,
    "!": 3,
    "==": 4, "!=": 4, "<": 4, "<=": 4, ">": 4, ">=": 4,
    "+": 5, "-": 5,
    "*": 6, "/": 6,
    "neg": 7,
    "^": 8,
}
ATOM = 9


@dataclass(frozen=True)
class IntLit:
    value: int
    pos: tuple[int, int] = field(default=(1, 1), compare=False, repr=False)


@dataclass(frozen=True)
class BoolLit:
    value: bool
    pos: tuple[int, int] = field(default=(1, 1), compare=False, repr=False)


@dataclass(frozen=True)
class Var:
    """A parameter reference, or ``\\result`` when ``name == RESULT``."""

    name: str
    pos: tuple[int, int] = field(default=(1, 1), compare=False, repr=False)


@dataclass(frozen=True)
class Unary:
    op: str  # "!" or "-"
    operand: "Predicate"
    pos: tuple[int, int] = field(default=(1, 1), compare=False, repr=False)


@dataclass(frozen=True)
class Binary:
    op: str
    left: "Predicate"
    right: "Predicate"
    pos: tuple[int, int] = field(default=(1, 1), compare=False, repr=False)


Predicate = Union[IntLit, BoolLit, Var, Unary, Binary]
Value = Union[int, bool]


class EvalFault(Exception):
    """Evaluation has no boolean answer: overflow, division by zero or a negative exponent."""

    def __init__(self, kind: str):
        self.kind = kind
        super().__init__(kind)


class UnboundIdentifier(LookupError):
    pass


def walk(pred: Predicate) -> Iterator[Predicate]:
    """Pre-order, left to right."""
    yield pred
    if isinstance(pred, Unary):
        yield from walk(pred.operand)
    elif isinstance(pred, Binary):
        yield from walk(pred.left)
        yield from walk(pred.right)


def free_names(pred: Predicate) -> set[str]:
    return {node.name for node in walk(pred) if isinstance(node, Var)}


def mentions_result(pred: Predicate) -> bool:
    return RESULT in free_names(pred)


def atomic_comparisons(pred: Predicate) -> list[tuple[Predicate, str, Predicate]]:
    return [(n.left, n.op, n.right) for n in walk(pred)
            if isinstance(n, Binary) and n.op in COMPARISONS]


def eval_predicate(pred: Predicate, bindings: Mapping[str, Value]) -> Value:
    """Evaluate ``pred`` under ``bindings``.

    Returns a bool for boolean predicates (an int for arithmetic
    sub-expressions). Raises EvalFault when arithmetic leaves the 64-bit
    range, divides by zero or takes a negative power, and
    UnboundIdentifier when a referenced name has no binding.
    """
    try:
        return _eval(pred, bindings)
    except int64.ArithmeticFault as exc:
        raise EvalFault(exc.kind) from None


def _eval(pred: Predicate, env: Mapping[str, Value]) -> Value:
    if isinstance(pred, (IntLit, BoolLit)):
        return pred.value
    if isinstance(pred, Var):
        try:
            return env[pred.name]
        except KeyError:
            raise UnboundIdentifier(pred.name) from None
    if isinstance(pred, Unary):
        val = _eval(pred.operand, env)
        if pred.op == "!":
            return not val
        return int64.neg(val)
    op = pred.op
    if op == "&&":
        return bool(_eval(pred.left, env)) and bool(_eval(pred.right, env))
    if op == "||":
        return bool(_eval(pred.left, env)) or bool(_eval(pred.right, env))
    a = _eval(pred.left, env)
    b = _eval(pred.right, env)
    if op == "==":
        return a == b
    if op == "!=":
        return a != b
    if op == "<":
        return a < b
    if op == "<=":
        return a <= b
    if op == ">":
        return a > b
    if op == ">=":
        return a >= b
    if op == "+":
        return int64.add(a, b)
    if op == "-":
        return int64.sub(a, b)
    if op == "*":
        return int64.mul(a, b)
    if op == "/":
        return int64.div(a, b)
    if op == "^":
        return int64.power(a, b)
    raise ValueError(f"unknown operator {op!r}")


def constant_value(pred: Predicate) -> int | None:
    """The integer a variable-free arithmetic expression denotes, else None."""
    if free_names(pred):
        return None
    if any(isinstance(n, BoolLit) or (isinstance(n, Binary) and n.op not in ARITHMETIC)
           or (isinstance(n, Unary) and n.op == "!") for n in walk(pred)):
        return None
    try:
        value = eval_predicate(pred, {})
    except EvalFault:
        return None
    return value


def precedence(pred: Predicate) -> int:
    if isinstance(pred, Binary):
        return PRECEDENCE[pred.op]
    if isinstance(pred, Unary):
        return PRECEDENCE["!"] if pred.op == "!" else PRECEDENCE["neg"]
    if isinstance(pred, IntLit) and pred.value < 0:
        return PRECEDENCE["neg"]
    return ATOM


def format_predicate(pred: Predicate) -> str:
    """Canonical text with the fewest parentheses that re-parse to the same tree."""
    if isinstance(pred, IntLit):
        return str(pred.value)
    if isinstance(pred, BoolLit):
        return "true" if pred.value else "false"
    if isinstance(pred, Var):
        return pred.name
    if isinstance(pred, Unary):
        floor = PRECEDENCE["!"] if pred.op == "!" else PRECEDENCE["neg"]
        # "-5" would re-read as the literal -5, so keep the negation explicit
        parens = precedence(pred.operand) < floor or (pred.op == "-" and isinstance(pred.operand, IntLit))
        inner = _wrap(pred.operand, parens)
        if pred.op == "-" and inner.startswith("-"):
            return "-" + " " + inner
        return pred.op + inner
    prec = PRECEDENCE[pred.op]
    if pred.op == "^":
        # right-associative; the exponent may be a negation
        left = _wrap(pred.left, precedence(pred.left) <= prec)
        right = _wrap(pred.right, precedence(pred.right) < PRECEDENCE["neg"])
        return f"{left}^{right}"
    if pred.op in COMPARISONS:
        left = _wrap(pred.left, precedence(pred.left) <= prec)
    else:
        left = _wrap(pred.left, precedence(pred.left) < prec)
    right = _wrap(pred.right, precedence(pred.right) <= prec)
    return f"{left} {pred.op} {right}"


def _wrap(pred: Predicate, parens: bool) -> str:
    text = format_predicate(pred)
    return f"({text})" if parens else text


def compile_predicate(pred: Predicate, names: tuple[str, ...]):
    """Compile ``pred`` into ``fn(values)`` where ``values[i]`` binds ``names[i]``.

    Same semantics as eval_predicate, several times faster; used where whole
    input domains are enumerated.
    """
    index = {n: i for i, n in enumerate(names)}
    missing = free_names(pred) - set(index)
    if missing:
        raise UnboundIdentifier(sorted(missing)[0])
    body = _compile(pred, index)

    def run(values):
        try:
            return body(values)
        except int64.ArithmeticFault as exc:
            raise EvalFault(exc.kind) from None
    return run


def _compile(pred: Predicate, index: dict[str, int]):
    if isinstance(pred, (IntLit, BoolLit)):
        v = pred.value
        return lambda env: v
    if isinstance(pred, Var):
        i = index[pred.name]
        return lambda env: env[i]
    if isinstance(pred, Unary):
        f = _compile(pred.operand, index)
        if pred.op == "!":
            return lambda env: not f(env)
        return lambda env: int64.neg(f(env))
    lf, rf = _compile(pred.left, index), _compile(pred.right, index)
    op = pred.op
    table = {
        "&&": lambda env: bool(lf(env)) and bool(rf(env)),
        "||": lambda env: bool(lf(env)) or bool(rf(env)),
        "==": lambda env: lf(env) == rf(env),
        "!=": lambda env: lf(env) != rf(env),
        "<": lambda env: lf(env) < rf(env),
        "<=": lambda env: lf(env) <= rf(env),
        ">": lambda env: lf(env) > rf(env),
        ">=": lambda env: lf(env) >= rf(env),
        "+": lambda env: int64.add(lf(env), rf(env)),
        "-": lambda env: int64.sub(lf(env), rf(env)),
        "*": lambda env: int64.mul(lf(env), rf(env)),
        "/": lambda env: int64.div(lf(env), rf(env)),
        "^": lambda env: int64.power(lf(env), rf(env)),
    }
    return table[op]
