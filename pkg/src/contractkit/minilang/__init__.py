"""The mini-language that teacher and student implementations are written in."""

from contractkit.minilang.ast import (
    Assign, BinOp, Call, Expr, FunctionDef, If, Lit, Name, Program, Return, Stmt, Throw,
    UnaryOp, VarDecl, While,
)
from contractkit.minilang.format import format_program
from contractkit.minilang.interpreter import DEFAULT_FUEL, run_function
from contractkit.minilang.outcome import FAULT_KINDS, Fault, Outcome, Thrown, Value
from contractkit.minilang.parser import parse_program

__all__ = [
    "Assign", "BinOp", "Call", "DEFAULT_FUEL", "Expr", "FAULT_KINDS", "Fault", "FunctionDef",
    "If", "Lit", "Name", "Outcome", "Program", "Return", "Stmt", "Throw", "Thrown", "UnaryOp",
    "Value", "VarDecl", "While", "format_program", "parse_program", "run_function",
]
