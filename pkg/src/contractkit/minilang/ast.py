"""Syntax tree of the mini-language.

Nodes are frozen dataclasses. Source positions (``pos``) are carried for
diagnostics and mutant locations but excluded from equality, so a program
equals its own re-parsed canonical text.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any, Union

from contractkit.contract.model import Param

Pos = tuple  # (line, column)


def _pos():
    return field(default=(1, 1), compare=False, repr=False)


@dataclass(frozen=True)
class Lit:
    value: Union[int, bool]
    pos: Pos = _pos()


@dataclass(frozen=True)
class Name:
    name: str
    pos: Pos = _pos()


@dataclass(frozen=True)
class UnaryOp:
    op: str  # "!" or "-"
    operand: "Expr"
    pos: Pos = _pos()


@dataclass(frozen=True)
class BinOp:
    op: str
    left: "Expr"
    right: "Expr"
    pos: Pos = _pos()  # position of the operator token


@dataclass(frozen=True)
class Call:
    func: str
    args: tuple["Expr", ...]
    pos: Pos = _pos()


Expr = Union[Lit, Name, UnaryOp, BinOp, Call]


@dataclass(frozen=True)
class VarDecl:
    name: str
    init: Expr
    pos: Pos = _pos()


@dataclass(frozen=True)
class Assign:
    name: str
    value: Expr
    pos: Pos = _pos()


@dataclass(frozen=True)
class If:
    cond: Expr
    then: tuple["Stmt", ...]
    orelse: tuple["Stmt", ...] | None = None
    pos: Pos = _pos()


@dataclass(frozen=True)
class While:
    cond: Expr
    body: tuple["Stmt", ...]
    pos: Pos = _pos()


@dataclass(frozen=True)
class Return:
    value: Expr
    pos: Pos = _pos()


@dataclass(frozen=True)
class Throw:
    exception: str
    pos: Pos = _pos()


Stmt = Union[VarDecl, Assign, If, While, Return, Throw]


@dataclass(frozen=True)
class FunctionDef:
    name: str
    params: tuple[Param, ...]
    return_type: str
    throws: tuple[str, ...]
    body: tuple[Stmt, ...]
    pos: Pos = _pos()


@dataclass(frozen=True)
class Program:
    functions: tuple[FunctionDef, ...]
    warnings: tuple = field(default=(), compare=False, repr=False)
    # memo of compiled closures; never observable through equality or runs
    _compiled: Any = field(default=None, compare=False, repr=False, hash=False)

    def function(self, name: str) -> FunctionDef:
        for fn in self.functions:
            if fn.name == name:
                return fn
        raise KeyError(name)

    def has_function(self, name: str) -> bool:
        return any(fn.name == name for fn in self.functions)

    def replace_function(self, fn: FunctionDef) -> "Program":
        funcs = tuple(fn if f.name == fn.name else f for f in self.functions)
        return Program(funcs, self.warnings)
