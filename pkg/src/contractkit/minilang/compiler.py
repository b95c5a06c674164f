"""Type-check a Program and compile each function body to Python closures.

Every closure takes ``(frame, ctx)``: ``frame`` is the per-call list of
variable slots and ``ctx`` the per-run activation state (fuel, call depth).
Statements return None to fall through, or the function's return value.
Nothing here mutates the Program; all run state lives in frame and ctx.
"""

from __future__ import annotations

from dataclasses import dataclass

from contractkit import int64
from contractkit.diagnostics import Diagnostic, error
from contractkit.minilang.ast import (
    Assign, BinOp, Call, FunctionDef, If, Lit, Name, Program, Return, Throw, UnaryOp,
    VarDecl, While,
)

MIN, MAX = int64.INT_MIN, int64.INT_MAX
MAX_CALL_DEPTH = 64


class FuelExhausted(Exception):
    pass


class ThrownSignal(Exception):
    def __init__(self, exception: str):
        self.exception = exception
        super().__init__(exception)


class Context:
    __slots__ = ("fuel", "depth")

    def __init__(self, fuel: int):
        self.fuel = fuel
        self.depth = 0


@dataclass
class CompiledFunction:
    definition: FunctionDef
    nslots: int
    body: object = None  # closure, filled after all signatures are known


def _overflow():
    raise int64.ArithmeticFault("overflow")


class _FunctionCompiler:
    def __init__(self, fn: FunctionDef, table: dict[str, CompiledFunction], diags: list):
        self.fn = fn
        self.table = table
        self.diags = diags
        self.scopes: list[dict[str, tuple[int, str]]] = [
            {p.name: (i, p.type) for i, p in enumerate(fn.params)}]
        self.nslots = len(fn.params)
        if len(self.scopes[0]) != len(fn.params):
            self.report("E107", fn.pos, f"duplicate parameter in {fn.name!r}")

    def report(self, code, pos, message):
        self.diags.append(error(code, pos[0], pos[1], message))

    def lookup(self, name):
        for scope in reversed(self.scopes):
            if name in scope:
                return scope[name]
        return None

    # -- statements
    def block(self, stmts):
        self.scopes.append({})
        compiled = [self.stmt(s) for s in stmts]
        self.scopes.pop()
        compiled = tuple(compiled)
        if len(compiled) == 1:
            return compiled[0]

        def run_block(frame, ctx):
            for s in compiled:
                r = s(frame, ctx)
                if r is not None:
                    return r
            return None
        return run_block

    def stmt(self, s):
        if isinstance(s, VarDecl):
            value, vtype = self.expr(s.init)
            if self.lookup(s.name) is not None:
                self.report("E107", s.pos, f"variable {s.name!r} is already declared")
            slot = self.nslots
            self.nslots += 1
            self.scopes[-1][s.name] = (slot, vtype)
            return self._store(slot, value)
        if isinstance(s, Assign):
            value, vtype = self.expr(s.value)
            found = self.lookup(s.name)
            if found is None:
                self.report("E103", s.pos, f"undeclared variable {s.name!r}")
                return self._store(0, value)
            slot, ttype = found
            if vtype is not None and vtype != ttype:
                self.report("E104", s.pos, f"cannot assign {vtype} to {ttype} variable {s.name!r}")
            return self._store(slot, value)
        if isinstance(s, If):
            cond = self.condition(s.cond)
            then = self.block(s.then)
            orelse = self.block(s.orelse) if s.orelse is not None else None

            def run_if(frame, ctx):
                ctx.fuel -= 1
                if ctx.fuel < 0:
                    raise FuelExhausted
                if cond(frame, ctx):
                    return then(frame, ctx)
                if orelse is not None:
                    return orelse(frame, ctx)
                return None
            return run_if
        if isinstance(s, While):
            cond = self.condition(s.cond)
            body = self.block(s.body)

            def run_while(frame, ctx):
                while True:
                    ctx.fuel -= 1
                    if ctx.fuel < 0:
                        raise FuelExhausted
                    if not cond(frame, ctx):
                        return None
                    r = body(frame, ctx)
                    if r is not None:
                        return r
            return run_while
        if isinstance(s, Return):
            value, vtype = self.expr(s.value)
            if vtype is not None and vtype != self.fn.return_type:
                self.report("E104", s.pos,
                            f"{self.fn.name!r} returns {self.fn.return_type}, not {vtype}")

            def run_return(frame, ctx):
                ctx.fuel -= 1
                if ctx.fuel < 0:
                    raise FuelExhausted
                return value(frame, ctx)
            return run_return
        if isinstance(s, Throw):
            if s.exception not in self.fn.throws:
                self.report("E105", s.pos,
                            f"{s.exception} is not declared in the throws list of {self.fn.name!r}")
            exc = s.exception

            def run_throw(frame, ctx):
                ctx.fuel -= 1
                if ctx.fuel < 0:
                    raise FuelExhausted
                raise ThrownSignal(exc)
            return run_throw
        raise TypeError(f"not a statement: {s!r}")

    @staticmethod
    def _store(slot, value):
        def run_store(frame, ctx):
            ctx.fuel -= 1
            if ctx.fuel < 0:
                raise FuelExhausted
            frame[slot] = value(frame, ctx)
            return None
        return run_store

    def condition(self, e):
        f, t = self.expr(e)
        if t is not None and t != "bool":
            self.report("E104", e.pos, f"condition must be bool, found {t}")
        return f

    # -- expressions; each returns (closure, type or None after an error)
    def expr(self, e):
        if isinstance(e, Lit):
            v = e.value
            return (lambda frame, ctx: v), ("bool" if isinstance(v, bool) else "int")
        if isinstance(e, Name):
            found = self.lookup(e.name)
            if found is None:
                self.report("E103", e.pos, f"undeclared variable {e.name!r}")
                return (lambda frame, ctx: 0), None
            slot, t = found
            return (lambda frame, ctx: frame[slot]), t
        if isinstance(e, UnaryOp):
            f, t = self.expr(e.operand)
            if e.op == "!":
                self._want(e, t, "bool")
                return (lambda frame, ctx: not f(frame, ctx)), "bool"
            self._want(e, t, "int")

            def neg(frame, ctx):
                v = -f(frame, ctx)
                if v > MAX:
                    _overflow()
                return v
            return neg, "int"
        if isinstance(e, BinOp):
            return self.binop(e)
        if isinstance(e, Call):
            return self.call(e)
        raise TypeError(f"not an expression: {e!r}")

    def _want(self, node, got, want):
        if got is not None and got != want:
            self.report("E104", node.pos, f"operator {node.op!r} needs {want}, found {got}")

    def binop(self, e):
        lf, lt = self.expr(e.left)
        rf, rt = self.expr(e.right)
        op = e.op
        if op in ("&&", "||"):
            self._want(e, lt, "bool")
            self._want(e, rt, "bool")
            if op == "&&":
                return (lambda frame, ctx: lf(frame, ctx) and rf(frame, ctx)), "bool"
            return (lambda frame, ctx: lf(frame, ctx) or rf(frame, ctx)), "bool"
        if op in ("==", "!="):
            if lt and rt and lt != rt:
                self.report("E104", e.pos, f"cannot compare {lt} with {rt}")
            if op == "==":
                return (lambda frame, ctx: lf(frame, ctx) == rf(frame, ctx)), "bool"
            return (lambda frame, ctx: lf(frame, ctx) != rf(frame, ctx)), "bool"
        self._want(e, lt, "int")
        self._want(e, rt, "int")
        if op == "<":
            return (lambda frame, ctx: lf(frame, ctx) < rf(frame, ctx)), "bool"
        if op == "<=":
            return (lambda frame, ctx: lf(frame, ctx) <= rf(frame, ctx)), "bool"
        if op == ">":
            return (lambda frame, ctx: lf(frame, ctx) > rf(frame, ctx)), "bool"
        if op == ">=":
            return (lambda frame, ctx: lf(frame, ctx) >= rf(frame, ctx)), "bool"
        if op == "+":
            def add(frame, ctx):
                v = lf(frame, ctx) + rf(frame, ctx)
                if v < MIN or v > MAX:
                    _overflow()
                return v
            return add, "int"
        if op == "-":
            def sub(frame, ctx):
                v = lf(frame, ctx) - rf(frame, ctx)
                if v < MIN or v > MAX:
                    _overflow()
                return v
            return sub, "int"
        if op == "*":
            def mul(frame, ctx):
                v = lf(frame, ctx) * rf(frame, ctx)
                if v < MIN or v > MAX:
                    _overflow()
                return v
            return mul, "int"
        if op == "/":
            def div(frame, ctx):
                a = lf(frame, ctx)
                return int64.div(a, rf(frame, ctx))
            return div, "int"
        raise ValueError(f"unknown operator {op!r}")

    def call(self, e):
        target = self.table.get(e.func)
        args = [self.expr(a) for a in e.args]
        if target is None:
            self.report("E109", e.pos, f"unknown function {e.func!r}")
            return (lambda frame, ctx: 0), None
        params = target.definition.params
        if len(params) != len(args):
            self.report("E104", e.pos,
                        f"{e.func!r} takes {len(params)} arguments, {len(args)} given")
        for p, (_, t) in zip(params, args):
            if t is not None and t != p.type:
                self.report("E104", e.pos, f"argument {p.name!r} of {e.func!r} must be {p.type}")
        arg_fns = tuple(f for f, _ in args)

        def run_call(frame, ctx):
            values = [f(frame, ctx) for f in arg_fns]
            return invoke(target, values, ctx)
        return run_call, target.definition.return_type


def _always_exits(stmts) -> bool:
    for s in stmts:
        if isinstance(s, (Return, Throw)):
            return True
        if isinstance(s, If) and s.orelse is not None:
            if _always_exits(s.then) and _always_exits(s.orelse):
                return True
        if isinstance(s, While) and isinstance(s.cond, Lit) and s.cond.value is True:
            return True
    return False


def invoke(target: CompiledFunction, values: list, ctx: Context):
    if ctx.depth >= MAX_CALL_DEPTH:
        raise FuelExhausted
    frame = values + [0] * (target.nslots - len(values))
    ctx.depth += 1
    try:
        result = target.body(frame, ctx)
    finally:
        ctx.depth -= 1
    if result is None:
        raise AssertionError(f"{target.definition.name} fell off its end")
    return result


def compile_program(program: Program) -> tuple[dict[str, CompiledFunction], list[Diagnostic]]:
    diags: list[Diagnostic] = []
    table: dict[str, CompiledFunction] = {}
    for fn in program.functions:
        if fn.name in table:
            diags.append(error("E106", fn.pos[0], fn.pos[1], f"duplicate function {fn.name!r}"))
            continue
        table[fn.name] = CompiledFunction(fn, len(fn.params))
    for entry in table.values():
        fn = entry.definition
        comp = _FunctionCompiler(fn, table, diags)
        entry.body = comp.block(fn.body) if fn.body else (lambda frame, ctx: None)
        entry.nslots = comp.nslots
        if not _always_exits(fn.body):
            diags.append(error("E108", fn.pos[0], fn.pos[1],
                               f"{fn.name!r} can reach its end without return or throw"))
    return table, diags
