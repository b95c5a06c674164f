"""Lexer and recursive-descent parser for ``.contract`` files.

Grammar (after an optional ``/** ... */`` wrapper and ``*`` gutters are
blanked out)::

    contract   := tag* signature EOF
    tag        := "@desc" TEXT
                | "@sub" TEXT "{" clause* "}"
                | "@robust" | "@pure"
    clause     := "@requires" pred ";" | "@ensures" pred ";" | "@signals" IDENT ";"
    signature  := modifier* type IDENT "(" [param ("," param)*] ")"
                  ["throws" IDENT ("," IDENT)*] [";"]
    param      := type IDENT

    pred       := or
    or         := and (("||" | "or") and)*
    and        := not (("&&" | "and") not)*
    not        := ("!" | "not") not | cmp
    cmp        := sum [cmpop sum]          cmpop: == = != < <= > >=
    sum        := term (("+" | "-") term)*
    term       := unary (("*" | "/") unary)*
    unary      := "-" unary | power
    power      := atom ["^" unary]
    atom       := INT | IDENT | "\\result" | "true" | "false" | "(" pred ")"
"""

from __future__ import annotations

import re
from dataclasses import dataclass

from contractkit import int64
from contractkit.contract.model import (
    Ensures, Param, Signals, Signature, Specification, SubContract,
)
from contractkit.contract.predicate import (
    RESULT, Binary, BoolLit, IntLit, Predicate, Unary, Var, walk,
)
from contractkit.diagnostics import Diagnostic, ParseError, error

TAGS = ("@desc", "@sub", "@requires", "@ensures", "@signals", "@robust", "@pure")
TYPE_NAMES = {
    "int": "int", "long": "int", "short": "int", "byte": "int",
    "bool": "bool", "boolean": "bool",
}
MODIFIERS = ("public", "private", "protected", "static", "final")
WORD_OPS = {"and": "&&", "or": "||", "not": "!"}
CMP_OPS = ("==", "=", "!=", "<", "<=", ">", ">=")

_TOKEN_RE = re.compile(r"""
    (?P<ws>[ \t\r\n]+)
  | (?P<tag>@[A-Za-z_]\w*)
  | (?P<result>\\result\b)
  | (?P<int>\d+)
  | (?P<ident>[A-Za-z_]\w*)
  | (?P<op>==|!=|<=|>=|&&|\|\||[-+*/^<>=!])
  | (?P<punct>[{}();,])
""", re.VERBOSE)


@dataclass(frozen=True)
class Token:
    kind: str  # tag, text, result, int, ident, op, punct, eof
    text: str
    line: int
    col: int


class _Abort(Exception):
    pass


def strip_comment_wrapper(source: str) -> str:
    """Blank out a leading ``/**``, per-line ``*`` gutters and the closing ``*/``.

    Replaced characters become spaces so token columns stay put.
    """
    if not source.lstrip().startswith("/**"):
        return source
    lines = source.split("\n")
    out = []
    opened = closed = False
    for line in lines:
        chars = list(line)
        i = 0
        while i < len(chars) and chars[i] in " \t":
            i += 1
        if not opened and line[i:i + 3] == "/**":
            chars[i:i + 3] = "   "
            opened = True
        elif opened and not closed and line[i:i + 2] == "*/":
            chars[i:i + 2] = "  "
            closed = True
        elif opened and not closed and line[i:i + 1] == "*":
            chars[i] = " "
        if opened and not closed:
            text = "".join(chars)
            end = text.rstrip().endswith("*/")
            if end:
                cut = text.rstrip()
                chars = list(cut[:-2] + "  " + text[len(cut):])
                closed = True
        out.append("".join(chars))
    return "\n".join(out)


def tokenize(source: str) -> list[Token]:
    text = strip_comment_wrapper(source)
    tokens: list[Token] = []
    pos, line, line_start = 0, 1, 0
    n = len(text)
    while pos < n:
        col = pos - line_start + 1
        m = _TOKEN_RE.match(text, pos)
        if m is None:
            raise ParseError([error("E001", line, col, f"unexpected character {text[pos]!r}")])
        kind = m.lastgroup
        lexeme = m.group()
        if kind == "ws":
            newlines = lexeme.count("\n")
            if newlines:
                line += newlines
                line_start = pos + lexeme.rindex("\n") + 1
            pos = m.end()
            continue
        tokens.append(Token(kind, lexeme, line, col))
        pos = m.end()
        if kind == "tag" and lexeme in ("@desc", "@sub"):
            # free text runs to end of line (or to "{" for @sub)
            eol = text.find("\n", pos)
            eol = n if eol < 0 else eol
            stop = eol
            if lexeme == "@sub":
                brace = text.find("{", pos, eol)
                stop = eol if brace < 0 else brace
            raw = text[pos:stop]
            lead = len(raw) - len(raw.lstrip())
            tokens.append(Token("text", raw.strip(), line, pos + lead - line_start + 1))
            pos = stop
    tokens.append(Token("eof", "", line, pos - line_start + 1))
    return tokens


class _Parser:
    def __init__(self, tokens: list[Token]):
        self.tokens = tokens
        self.i = 0
        self.diags: list[Diagnostic] = []

    # -- token helpers
    @property
    def tok(self) -> Token:
        return self.tokens[self.i]

    def peek(self, offset: int = 1) -> Token:
        return self.tokens[min(self.i + offset, len(self.tokens) - 1)]

    def advance(self) -> Token:
        tok = self.tokens[self.i]
        if tok.kind != "eof":
            self.i += 1
        return tok

    def at(self, kind: str, text: str | None = None) -> bool:
        return self.tok.kind == kind and (text is None or self.tok.text == text)

    def fail(self, message: str, tok: Token | None = None, code: str = "E002"):
        tok = tok or self.tok
        self.diags.append(error(code, tok.line, tok.col, message))
        raise _Abort

    def expect(self, kind: str, text: str | None = None) -> Token:
        if not self.at(kind, text):
            want = text or kind
            got = self.tok.text or "end of input"
            self.fail(f"expected {want!r}, found {got!r}")
        return self.advance()

    # -- contract structure
    def contract(self) -> Specification | None:
        description = None
        subs: list[tuple[SubContract, Token]] = []
        robust = pure = False
        seen_flags: set[str] = set()
        while self.at("tag"):
            tag = self.advance()
            if tag.text == "@desc":
                text = self.advance()
                if description is not None:
                    self.diags.append(error("E013", tag.line, tag.col, "duplicate @desc"))
                description = text.text
            elif tag.text == "@sub":
                subs.append(self.subcontract(tag))
            elif tag.text in ("@robust", "@pure"):
                if tag.text in seen_flags:
                    self.diags.append(error("E013", tag.line, tag.col, f"duplicate {tag.text}"))
                seen_flags.add(tag.text)
                robust = robust or tag.text == "@robust"
                pure = pure or tag.text == "@pure"
            elif tag.text in TAGS:
                self.fail(f"{tag.text} outside a @sub block", tag)
            else:
                self.fail(f"unknown tag {tag.text}", tag, code="E003")
        signature, sig_tok = self.signature()
        if not self.at("eof"):
            self.fail(f"unexpected {self.tok.text!r} after signature")
        if not subs:
            self.diags.append(error("E008", sig_tok.line, sig_tok.col, "empty contract"))
        self.validate(signature, subs)
        if any(d.is_error for d in self.diags):
            return None
        return Specification(description or "", signature, tuple(s for s, _ in subs),
                             robust, pure)

    def subcontract(self, tag: Token) -> tuple[SubContract, Token]:
        name_tok = self.advance()
        if not name_tok.text:
            self.fail("@sub needs a name", name_tok)
        self.expect("punct", "{")
        requires = ensures = signals = None
        while not self.at("punct", "}"):
            clause = self.tok
            if not self.at("tag"):
                self.fail(f"expected a clause or '}}', found {clause.text or 'end of input'!r}")
            self.advance()
            if clause.text == "@requires":
                if requires is not None:
                    self.diags.append(error("E013", clause.line, clause.col, "duplicate @requires"))
                requires = (self.predicate(), clause)
            elif clause.text == "@ensures":
                if ensures is not None:
                    self.diags.append(error("E013", clause.line, clause.col, "duplicate @ensures"))
                ensures = (self.predicate(), clause)
            elif clause.text == "@signals":
                if signals is not None:
                    self.diags.append(error("E013", clause.line, clause.col, "duplicate @signals"))
                signals = (self.expect("ident"), clause)
            elif clause.text in TAGS:
                self.fail(f"{clause.text} not allowed inside @sub", clause)
            else:
                self.fail(f"unknown tag {clause.text}", clause, code="E003")
            self.expect("punct", ";")
        self.expect("punct", "}")
        if ensures and signals:
            self.diags.append(error("E007", signals[1].line, signals[1].col,
                                    f"subcontract {name_tok.text!r} has both @ensures and @signals"))
        if not ensures and not signals:
            self.diags.append(error("E012", tag.line, tag.col,
                                    f"subcontract {name_tok.text!r} has neither @ensures nor @signals"))
        behavior = Ensures(ensures[0]) if ensures else Signals(signals[0].text if signals else "")
        req = requires[0] if requires else BoolLit(True, (tag.line, tag.col))
        return SubContract(name_tok.text, req, behavior), name_tok

    def signature(self) -> tuple[Signature, Token]:
        while self.at("ident") and self.tok.text in MODIFIERS:
            self.advance()
        start = self.tok
        return_type = self.type_name()
        name = self.expect("ident")
        self.expect("punct", "(")
        params: list[Param] = []
        seen: set[str] = set()
        if not self.at("punct", ")"):
            while True:
                ptype = self.type_name()
                pname = self.expect("ident")
                if pname.text in seen:
                    self.diags.append(error("E011", pname.line, pname.col,
                                            f"duplicate parameter {pname.text!r}"))
                seen.add(pname.text)
                params.append(Param(pname.text, ptype))
                if not self.at("punct", ","):
                    break
                self.advance()
        self.expect("punct", ")")
        throws: list[str] = []
        if self.at("ident", "throws"):
            self.advance()
            throws.append(self.expect("ident").text)
            while self.at("punct", ","):
                self.advance()
                throws.append(self.expect("ident").text)
        if self.at("punct", ";"):
            self.advance()
        return Signature(return_type, name.text, tuple(params), tuple(throws)), start

    def type_name(self) -> str:
        tok = self.tok
        if tok.kind != "ident" or tok.text not in TYPE_NAMES:
            self.fail(f"expected a type, found {tok.text or 'end of input'!r}")
        self.advance()
        return TYPE_NAMES[tok.text]

    # -- predicates
    def predicate(self) -> Predicate:
        return self.or_expr()

    def connective(self, op: str) -> bool:
        tok = self.tok
        if tok.kind == "op" and tok.text == op:
            return True
        return tok.kind == "ident" and WORD_OPS.get(tok.text) == op

    def or_expr(self) -> Predicate:
        left = self.and_expr()
        while self.connective("||"):
            tok = self.advance()
            left = Binary("||", left, self.and_expr(), (tok.line, tok.col))
        return left

    def and_expr(self) -> Predicate:
        left = self.not_expr()
        while self.connective("&&"):
            tok = self.advance()
            left = Binary("&&", left, self.not_expr(), (tok.line, tok.col))
        return left

    def not_expr(self) -> Predicate:
        if self.connective("!"):
            tok = self.advance()
            return Unary("!", self.not_expr(), (tok.line, tok.col))
        return self.cmp_expr()

    def cmp_expr(self) -> Predicate:
        left = self.sum_expr()
        if self.tok.kind == "op" and self.tok.text in CMP_OPS:
            tok = self.advance()
            op = "==" if tok.text == "=" else tok.text
            left = Binary(op, left, self.sum_expr(), (tok.line, tok.col))
            if self.tok.kind == "op" and self.tok.text in CMP_OPS:
                self.fail("comparisons do not chain; add parentheses")
        return left

    def sum_expr(self) -> Predicate:
        left = self.term_expr()
        while self.tok.kind == "op" and self.tok.text in ("+", "-"):
            tok = self.advance()
            left = Binary(tok.text, left, self.term_expr(), (tok.line, tok.col))
        return left

    def term_expr(self) -> Predicate:
        left = self.unary_expr()
        while self.tok.kind == "op" and self.tok.text in ("*", "/"):
            tok = self.advance()
            left = Binary(tok.text, left, self.unary_expr(), (tok.line, tok.col))
        return left

    def unary_expr(self) -> Predicate:
        if self.at("op", "-"):
            tok = self.advance()
            nxt = self.peek()
            if self.tok.kind == "int" and not (nxt.kind == "op" and nxt.text == "^"):
                lit = self.advance()
                return self.int_literal(-int(lit.text), tok)
            return Unary("-", self.unary_expr(), (tok.line, tok.col))
        return self.power_expr()

    def power_expr(self) -> Predicate:
        base = self.atom()
        if self.at("op", "^"):
            tok = self.advance()
            return Binary("^", base, self.unary_expr(), (tok.line, tok.col))
        return base

    def atom(self) -> Predicate:
        tok = self.tok
        if tok.kind == "int":
            self.advance()
            return self.int_literal(int(tok.text), tok)
        if tok.kind == "result":
            self.advance()
            return Var(RESULT, (tok.line, tok.col))
        if tok.kind == "ident" and tok.text in ("true", "false"):
            self.advance()
            return BoolLit(tok.text == "true", (tok.line, tok.col))
        if tok.kind == "ident" and tok.text not in WORD_OPS:
            self.advance()
            return Var(tok.text, (tok.line, tok.col))
        if self.at("punct", "("):
            self.advance()
            inner = self.predicate()
            self.expect("punct", ")")
            return inner
        self.fail(f"expected an expression, found {tok.text or 'end of input'!r}")

    def int_literal(self, value: int, tok: Token) -> IntLit:
        if not int64.fits(value):
            self.fail(f"integer literal {value} outside the 64-bit range", tok, code="E001")
        return IntLit(value, (tok.line, tok.col))

    # -- semantic checks
    def validate(self, sig: Signature, subs: list[tuple[SubContract, Token]]):
        types = {p.name: p.type for p in sig.params}
        names: set[str] = set()
        for sub, name_tok in subs:
            if sub.name in names:
                self.diags.append(error("E004", name_tok.line, name_tok.col,
                                        f"duplicate subcontract name {sub.name!r}"))
            names.add(sub.name)
            for node in walk(sub.requires):
                if isinstance(node, Var) and node.name == RESULT:
                    self.diags.append(error("E005", *node.pos, "\\result in precondition"))
            self.check_types(sub.requires, types, None, "bool")
            if isinstance(sub.behavior, Ensures):
                self.check_types(sub.behavior.predicate, types, sig.return_type, "bool")
            elif sub.behavior.exception and sub.behavior.exception not in sig.throws:
                self.diags.append(error("E006", name_tok.line, name_tok.col,
                                        f"{sub.behavior.exception} is not declared in throws"))

    def check_types(self, pred: Predicate, types: dict[str, str], result_type: str | None,
                    want: str):
        got = self.type_of(pred, types, result_type)
        if got is not None and got != want:
            self.diags.append(error("E010", *pred.pos, f"expected a {want} expression, found {got}"))

    def type_of(self, pred: Predicate, types: dict[str, str], result_type: str | None) -> str | None:
        """Infer a type; None means an error was already reported below."""
        if isinstance(pred, IntLit):
            return "int"
        if isinstance(pred, BoolLit):
            return "bool"
        if isinstance(pred, Var):
            if pred.name == RESULT:
                return result_type  # None inside requires; E005 covers it
            if pred.name not in types:
                self.diags.append(error("E009", *pred.pos, f"unknown identifier {pred.name!r}"))
                return None
            return types[pred.name]
        if isinstance(pred, Unary):
            want = "bool" if pred.op == "!" else "int"
            return self.operands(pred, [pred.operand], want, want, types, result_type)
        if pred.op in ("&&", "||"):
            return self.operands(pred, [pred.left, pred.right], "bool", "bool", types, result_type)
        if pred.op in ("==", "!="):
            lt = self.type_of(pred.left, types, result_type)
            rt = self.type_of(pred.right, types, result_type)
            if lt and rt and lt != rt:
                self.diags.append(error("E010", *pred.pos, f"cannot compare {lt} with {rt}"))
            return "bool"
        if pred.op in ("<", "<=", ">", ">="):
            return self.operands(pred, [pred.left, pred.right], "int", "bool", types, result_type)
        return self.operands(pred, [pred.left, pred.right], "int", "int", types, result_type)

    def operands(self, node, children, want, result, types, result_type) -> str:
        for child in children:
            got = self.type_of(child, types, result_type)
            if got is not None and got != want:
                self.diags.append(error("E010", *node.pos,
                                        f"operator {node.op!r} needs {want} operands, found {got}"))
        return result


def parse_spec(source: str) -> Specification:
    """Parse contract text. Raises ParseError carrying positioned diagnostics."""
    try:
        tokens = tokenize(source)
    except ParseError:
        raise
    parser = _Parser(tokens)
    try:
        spec = parser.contract()
    except _Abort:
        spec = None
    except RecursionError:
        tok = parser.tok
        parser.diags.append(error("E002", tok.line, tok.col, "expression nested too deeply"))
        spec = None
    if spec is None:
        raise ParseError(parser.diags)
    return spec


def parse_predicate(text: str) -> Predicate:
    """Parse a bare predicate (no type checks). Handy for tests and tooling."""
    parser = _Parser(tokenize(text))
    try:
        pred = parser.predicate()
        if not parser.at("eof"):
            parser.fail(f"unexpected {parser.tok.text!r}")
    except _Abort:
        raise ParseError(parser.diags) from None
    return pred
