"""Diagnostics and error types shared by every stage of the toolchain."""

from __future__ import annotations

from dataclasses import dataclass

ERROR = "error"
WARNING = "warning"

# Stable codes; tests and golden files match on these.
CODES = {
    # contract notation
    "E001": "lexical error",
    "E002": "syntax error",
    "E003": "unknown tag",
    "E004": "duplicate subcontract name",
    "E005": "\\result in precondition",
    "E006": "signalled exception not declared in throws",
    "E007": "both ensures and signals in one subcontract",
    "E008": "empty contract",
    "E009": "unknown identifier",
    "E010": "type mismatch",
    "E011": "duplicate parameter",
    "E012": "subcontract has neither ensures nor signals",
    "E013": "duplicate tag",
    # mini-language
    "E101": "lexical error",
    "E102": "syntax error",
    "E103": "undeclared variable",
    "E104": "type mismatch",
    "E105": "undeclared thrown exception",
    "E106": "duplicate function",
    "E107": "duplicate variable",
    "E108": "missing return",
    "E109": "unknown function",
    "E110": "integer literal out of range",
    "W101": "empty program",
    # suite and bundle files
    "E201": "suite syntax error",
    "E202": "duplicate test name",
    "E301": "manifest error",
}


@dataclass(frozen=True)
class Diagnostic:
    severity: str
    line: int
    column: int
    message: str
    code: str
    source: str | None = None

    def __post_init__(self):
        if self.severity not in (ERROR, WARNING):
            raise ValueError(f"bad severity {self.severity!r}")
        if self.line < 1 or self.column < 1:
            raise ValueError("diagnostic positions are 1-based")

    @property
    def is_error(self) -> bool:
        return self.severity == ERROR

    def __str__(self) -> str:
        where = f"{self.source}:" if self.source else ""
        return f"{where}{self.line}:{self.column}: {self.severity} {self.code}: {self.message}"

    def as_record(self) -> dict:
        return {
            "kind": "diagnostic",
            "severity": self.severity,
            "code": self.code,
            "line": self.line,
            "column": self.column,
            "message": self.message,
            "source": self.source,
        }


def error(code: str, line: int, column: int, message: str | None = None,
          source: str | None = None) -> Diagnostic:
    return Diagnostic(ERROR, max(line, 1), max(column, 1), message or CODES[code], code, source)


def warning(code: str, line: int, column: int, message: str | None = None,
            source: str | None = None) -> Diagnostic:
    return Diagnostic(WARNING, max(line, 1), max(column, 1), message or CODES[code], code, source)


class ParseError(Exception):
    """Raised when a source text cannot be turned into a valid value.

    ``diagnostics`` always holds at least one error-level entry.
    """

    def __init__(self, diagnostics: list[Diagnostic]):
        self.diagnostics = list(diagnostics)
        assert any(d.is_error for d in self.diagnostics)
        super().__init__("\n".join(str(d) for d in self.diagnostics))

    def with_source(self, source: str) -> "ParseError":
        return ParseError([
            Diagnostic(d.severity, d.line, d.column, d.message, d.code, source)
            for d in self.diagnostics
        ])


class UsageError(Exception):
    """A caller broke an operation's precondition (unknown function, bad arity, ...)."""
