"""Recursive-descent parser for ``.mini`` implementation files.

Grammar::

    program   := function*
    function  := type IDENT "(" [type IDENT ("," type IDENT)*] ")"
                 ["throws" IDENT ("," IDENT)*] block
    block     := "{" stmt* "}"
    stmt      := "var" IDENT "=" expr ";"
               | IDENT "=" expr ";"
               | "if" "(" expr ")" block ["else" (block | if-stmt)]
               | "while" "(" expr ")" block
               | "return" expr ";"
               | "throw" IDENT ";"
    expr      := or
    or        := and ("||" and)*
    and       := eq ("&&" eq)*
    eq        := rel [("==" | "!=") rel]
    rel       := add [("<" | "<=" | ">" | ">=") add]
    add       := mul (("+" | "-") mul)*
    mul       := unary (("*" | "/") unary)*
    unary     := ("!" | "-") unary | primary
    primary   := INT | "true" | "false" | IDENT | IDENT "(" [expr ("," expr)*] ")"
               | "(" expr ")"

Types are ``int`` (64-bit signed, ``long`` accepted) and ``bool``
(``boolean`` accepted). Comments are ``//`` to end of line or ``/* ... */``.
"""

from __future__ import annotations

import re

from contractkit import int64
from contractkit.contract.model import Param
from contractkit.diagnostics import ParseError, error, warning
from contractkit.minilang.ast import (
    Assign, BinOp, Call, Expr, FunctionDef, If, Lit, Name, Program, Return, Stmt, Throw,
    UnaryOp, VarDecl, While,
)

TYPE_NAMES = {"int": "int", "long": "int", "bool": "bool", "boolean": "bool"}
KEYWORDS = {"var", "if", "else", "while", "return", "throw", "throws", "true", "false",
            *TYPE_NAMES}

_TOKEN_RE = re.compile(r"""
    (?P<ws>\s+)
  | (?P<comment>//[^\n]*|/\*.*?\*/)
  | (?P<int>\d+)
  | (?P<ident>[A-Za-z_]\w*)
  | (?P<op>==|!=|<=|>=|&&|\|\||[-+*/<>=!])
  | (?P<punct>[{}();,])
""", re.VERBOSE | re.DOTALL)


def tokenize(source: str) -> list[tuple[str, str, int, int]]:
    tokens = []
    pos, line, line_start = 0, 1, 0
    while pos < len(source):
        m = _TOKEN_RE.match(source, pos)
        col = pos - line_start + 1
        if m is None:
            if source.startswith("/*", pos):
                raise ParseError([error("E101", line, col, "unterminated comment")])
            raise ParseError([error("E101", line, col, f"unexpected character {source[pos]!r}")])
        kind, text = m.lastgroup, m.group()
        if kind not in ("ws", "comment"):
            tokens.append((kind, text, line, col))
        newlines = text.count("\n")
        if newlines:
            line += newlines
            line_start = pos + text.rindex("\n") + 1
        pos = m.end()
    tokens.append(("eof", "", line, pos - line_start + 1))
    return tokens


class _Abort(Exception):
    pass


class _Parser:
    def __init__(self, tokens):
        self.tokens = tokens
        self.i = 0
        self.diags = []

    @property
    def tok(self):
        return self.tokens[self.i]

    def peek(self, k=1):
        return self.tokens[min(self.i + k, len(self.tokens) - 1)]

    def at(self, kind, text=None):
        t = self.tok
        return t[0] == kind and (text is None or t[1] == text)

    def at_kw(self, word):
        return self.at("ident", word)

    def advance(self):
        t = self.tok
        if t[0] != "eof":
            self.i += 1
        return t

    def fail(self, message, tok=None, code="E102"):
        tok = tok or self.tok
        self.diags.append(error(code, tok[2], tok[3], message))
        raise _Abort

    def expect(self, kind, text=None):
        if not self.at(kind, text):
            self.fail(f"expected {text or kind!r}, found {self.tok[1] or 'end of input'!r}")
        return self.advance()

    def ident(self):
        t = self.tok
        if t[0] != "ident" or t[1] in KEYWORDS:
            self.fail(f"expected an identifier, found {t[1] or 'end of input'!r}")
        return self.advance()

    def type_name(self):
        t = self.tok
        if t[0] != "ident" or t[1] not in TYPE_NAMES:
            self.fail(f"expected a type, found {t[1] or 'end of input'!r}")
        self.advance()
        return TYPE_NAMES[t[1]]

    def program(self):
        funcs = []
        while not self.at("eof"):
            funcs.append(self.function())
        return funcs

    def function(self):
        start = self.tok
        rtype = self.type_name()
        name = self.ident()
        self.expect("punct", "(")
        params = []
        if not self.at("punct", ")"):
            while True:
                ptype = self.type_name()
                params.append(Param(self.ident()[1], ptype))
                if not self.at("punct", ","):
                    break
                self.advance()
        self.expect("punct", ")")
        throws = []
        if self.at_kw("throws"):
            self.advance()
            throws.append(self.ident()[1])
            while self.at("punct", ","):
                self.advance()
                throws.append(self.ident()[1])
        body = self.block()
        return FunctionDef(name[1], tuple(params), rtype, tuple(throws), body,
                           (start[2], start[3]))

    def block(self):
        self.expect("punct", "{")
        stmts = []
        while not self.at("punct", "}"):
            if self.at("eof"):
                self.fail("unterminated block")
            stmts.append(self.statement())
        self.advance()
        return tuple(stmts)

    def statement(self) -> Stmt:
        t = self.tok
        pos = (t[2], t[3])
        if self.at_kw("var"):
            self.advance()
            name = self.ident()[1]
            self.expect("op", "=")
            init = self.expr()
            self.expect("punct", ";")
            return VarDecl(name, init, pos)
        if self.at_kw("if"):
            return self.if_stmt()
        if self.at_kw("while"):
            self.advance()
            self.expect("punct", "(")
            cond = self.expr()
            self.expect("punct", ")")
            return While(cond, self.block(), pos)
        if self.at_kw("return"):
            self.advance()
            value = self.expr()
            self.expect("punct", ";")
            return Return(value, pos)
        if self.at_kw("throw"):
            self.advance()
            exc = self.ident()[1]
            self.expect("punct", ";")
            return Throw(exc, pos)
        if t[0] == "ident" and t[1] not in KEYWORDS and self.peek()[:2] == ("op", "="):
            self.advance()
            self.advance()
            value = self.expr()
            self.expect("punct", ";")
            return Assign(t[1], value, pos)
        self.fail(f"expected a statement, found {t[1] or 'end of input'!r}")

    def if_stmt(self):
        t = self.advance()
        self.expect("punct", "(")
        cond = self.expr()
        self.expect("punct", ")")
        then = self.block()
        orelse = None
        if self.at_kw("else"):
            self.advance()
            orelse = (self.if_stmt(),) if self.at_kw("if") else self.block()
        return If(cond, then, orelse, (t[2], t[3]))

    def expr(self) -> Expr:
        return self.or_expr()

    def _left_assoc(self, ops, sub):
        left = sub()
        while self.tok[0] == "op" and self.tok[1] in ops:
            t = self.advance()
            left = BinOp(t[1], left, sub(), (t[2], t[3]))
        return left

    def _non_assoc(self, ops, sub):
        left = sub()
        if self.tok[0] == "op" and self.tok[1] in ops:
            t = self.advance()
            left = BinOp(t[1], left, sub(), (t[2], t[3]))
            if self.tok[0] == "op" and self.tok[1] in ops:
                self.fail("comparisons do not chain; add parentheses")
        return left

    def or_expr(self):
        return self._left_assoc(("||",), self.and_expr)

    def and_expr(self):
        return self._left_assoc(("&&",), self.eq_expr)

    def eq_expr(self):
        return self._non_assoc(("==", "!="), self.rel_expr)

    def rel_expr(self):
        return self._non_assoc(("<", "<=", ">", ">="), self.add_expr)

    def add_expr(self):
        return self._left_assoc(("+", "-"), self.mul_expr)

    def mul_expr(self):
        return self._left_assoc(("*", "/"), self.unary)

    def unary(self):
        t = self.tok
        if t[0] == "op" and t[1] in ("!", "-"):
            self.advance()
            if t[1] == "-" and self.tok[0] == "int":
                lit = self.advance()
                return self.literal(-int(lit[1]), t)
            return UnaryOp(t[1], self.unary(), (t[2], t[3]))
        return self.primary()

    def primary(self):
        t = self.tok
        pos = (t[2], t[3])
        if t[0] == "int":
            self.advance()
            return self.literal(int(t[1]), t)
        if t[0] == "ident" and t[1] in ("true", "false"):
            self.advance()
            return Lit(t[1] == "true", pos)
        if t[0] == "ident" and t[1] not in KEYWORDS:
            self.advance()
            if self.at("punct", "("):
                self.advance()
                args = []
                if not self.at("punct", ")"):
                    args.append(self.expr())
                    while self.at("punct", ","):
                        self.advance()
                        args.append(self.expr())
                self.expect("punct", ")")
                return Call(t[1], tuple(args), pos)
            return Name(t[1], pos)
        if self.at("punct", "("):
            self.advance()
            inner = self.expr()
            self.expect("punct", ")")
            return inner
        self.fail(f"expected an expression, found {t[1] or 'end of input'!r}")

    def literal(self, value, tok):
        if not int64.fits(value):
            self.fail(f"integer literal {value} outside the 64-bit range", tok, code="E110")
        return Lit(value, (tok[2], tok[3]))


def parse_program(source: str) -> Program:
    """Parse and check a program.

    Raises ParseError on syntax errors, undeclared variables, type
    mismatches or undeclared thrown exceptions. An empty source yields a
    Program with no functions and a W101 warning.
    """
    from contractkit.minilang.compiler import compile_program

    parser = _Parser(tokenize(source))
    try:
        funcs = parser.program()
    except _Abort:
        raise ParseError(parser.diags) from None
    except RecursionError:
        t = parser.tok
        raise ParseError([error("E102", t[2], t[3], "expression nested too deeply")]) from None
    warnings = ()
    if not funcs:
        warnings = (warning("W101", 1, 1, "program defines no functions"),)
    program = Program(tuple(funcs), warnings)
    compiled, diags = compile_program(program)
    if diags:
        raise ParseError(diags)
    object.__setattr__(program, "_compiled", compiled)
    return program
