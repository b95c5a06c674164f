"""Canonical source text for a Program (parse(format(p)) == p)."""

from __future__ import annotations

from contractkit.minilang.ast import (
    Assign, BinOp, Call, If, Lit, Name, Program, Return, Throw, UnaryOp, VarDecl, While,
)

_PREC = {"||": 1, "&&": 2, "==": 3, "!=": 3, "<": 4, "<=": 4, ">": 4, ">=": 4,
         "+": 5, "-": 5, "*": 6, "/": 6}
_UNARY = 7
_ATOM = 8
_NON_ASSOC = {"==", "!=", "<", "<=", ">", ">="}


def _prec(e) -> int:
    if isinstance(e, BinOp):
        return _PREC[e.op]
    if isinstance(e, UnaryOp) or (isinstance(e, Lit) and not isinstance(e.value, bool)
                                  and e.value < 0):
        return _UNARY
    return _ATOM


def format_expr(e) -> str:
    if isinstance(e, Lit):
        if isinstance(e.value, bool):
            return "true" if e.value else "false"
        return str(e.value)
    if isinstance(e, Name):
        return e.name
    if isinstance(e, Call):
        return f"{e.func}({', '.join(format_expr(a) for a in e.args)})"
    if isinstance(e, UnaryOp):
        inner = format_expr(e.operand)
        if _prec(e.operand) < _UNARY or (e.op == "-" and isinstance(e.operand, Lit)):
            inner = f"({inner})"
        if e.op == "-" and inner.startswith("-"):
            return "- " + inner
        return e.op + inner
    p = _PREC[e.op]
    left, right = format_expr(e.left), format_expr(e.right)
    lp, rp = _prec(e.left), _prec(e.right)
    if lp < p or (lp == p and e.op in _NON_ASSOC):
        left = f"({left})"
    if rp <= p:
        right = f"({right})"
    return f"{left} {e.op} {right}"


def _stmts(stmts, indent, out):
    for s in stmts:
        _stmt(s, indent, out)


def _stmt(s, indent, out):
    pad = "    " * indent
    if isinstance(s, VarDecl):
        out.append(f"{pad}var {s.name} = {format_expr(s.init)};")
    elif isinstance(s, Assign):
        out.append(f"{pad}{s.name} = {format_expr(s.value)};")
    elif isinstance(s, Return):
        out.append(f"{pad}return {format_expr(s.value)};")
    elif isinstance(s, Throw):
        out.append(f"{pad}throw {s.exception};")
    elif isinstance(s, While):
        out.append(f"{pad}while ({format_expr(s.cond)}) {{")
        _stmts(s.body, indent + 1, out)
        out.append(f"{pad}}}")
    elif isinstance(s, If):
        out.append(f"{pad}if ({format_expr(s.cond)}) {{")
        _stmts(s.then, indent + 1, out)
        if s.orelse is None:
            out.append(f"{pad}}}")
        else:
            out.append(f"{pad}}} else {{")
            _stmts(s.orelse, indent + 1, out)
            out.append(f"{pad}}}")
    else:
        raise TypeError(f"not a statement: {s!r}")


def format_program(program: Program) -> str:
    out: list[str] = []
    for i, fn in enumerate(program.functions):
        if i:
            out.append("")
        params = ", ".join(f"{p.type} {p.name}" for p in fn.params)
        head = f"{fn.return_type} {fn.name}({params})"
        if fn.throws:
            head += " throws " + ", ".join(fn.throws)
        out.append(head + " {")
        _stmts(fn.body, 1, out)
        out.append("}")
    return "\n".join(out) + ("\n" if out else "")
