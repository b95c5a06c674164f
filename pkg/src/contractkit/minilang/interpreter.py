"""Deterministic execution of mini-language functions under a fuel budget."""

from __future__ import annotations

from typing import Sequence

from contractkit import int64
from contractkit.diagnostics import UsageError
from contractkit.minilang.ast import Program
from contractkit.minilang.compiler import (
    Context, FuelExhausted, ThrownSignal, compile_program, invoke,
)
from contractkit.minilang.outcome import Fault, Outcome, Thrown, Value

DEFAULT_FUEL = 1_000_000


def compiled(program: Program):
    table = program._compiled
    if table is None:
        table, diags = compile_program(program)
        if diags:
            raise UsageError("program does not type-check: " + "; ".join(map(str, diags)))
        object.__setattr__(program, "_compiled", table)
    return table


def check_args(params, args: Sequence) -> None:
    if len(params) != len(args):
        raise UsageError(f"expected {len(params)} arguments, got {len(args)}")
    for p, a in zip(params, args):
        if p.type == "bool":
            ok = isinstance(a, bool)
        else:
            ok = isinstance(a, int) and not isinstance(a, bool) and int64.fits(a)
        if not ok:
            raise UsageError(f"argument {p.name!r} must be a {p.type}, got {a!r}")


def run_function(program: Program, name: str, args: Sequence, fuel: int = DEFAULT_FUEL) -> Outcome:
    """Run ``name`` on ``args``.

    Each executed statement and each loop-condition test costs one unit of
    fuel. Overflow, division by zero and running out of fuel come back as
    Fault outcomes; an unknown function or mismatched arguments raise
    UsageError.
    """
    if fuel < 1:
        raise UsageError("fuel must be positive")
    table = compiled(program)
    target = table.get(name)
    if target is None:
        raise UsageError(f"unknown function {name!r}")
    check_args(target.definition.params, args)
    ctx = Context(fuel)
    try:
        return Value(invoke(target, list(args), ctx))
    except ThrownSignal as exc:
        return Thrown(exc.exception)
    except int64.ArithmeticFault as exc:
        return Fault(exc.kind)
    except (FuelExhausted, RecursionError):
        return Fault("fuel_exhausted")
