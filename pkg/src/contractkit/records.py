"""Structured output records (JSON lines) and their human-readable tables.

Every command produces a list of flat-ish dict records with a ``kind`` key.
They are written one per line to the machine stream; ``render`` turns the
same records into tables for people, which is also how ``report`` re-renders
a stored record file.
"""

from __future__ import annotations

import json
from fractions import Fraction
from itertools import groupby


def dumps(record: dict) -> str:
    return json.dumps(record, sort_keys=True, ensure_ascii=False, separators=(",", ":"))


def dump_lines(records: list[dict]) -> str:
    return "".join(dumps(r) + "\n" for r in records)


def load_lines(text: str) -> list[dict]:
    out = []
    for lineno, line in enumerate(text.splitlines(), 1):
        if not line.strip():
            continue
        try:
            record = json.loads(line)
        except json.JSONDecodeError as exc:
            raise ValueError(f"line {lineno}: not a JSON record ({exc.msg})") from None
        if not isinstance(record, dict) or "kind" not in record:
            raise ValueError(f"line {lineno}: record has no 'kind'")
        out.append(record)
    return out


def percent(text: str | None) -> str:
    if text is None:
        return "-"
    return f"{float(Fraction(text)) * 100:.1f}%"


def _bindings(witness: dict) -> str:
    return ", ".join(f"{k}={_value(v)}" for k, v in witness.items())


def _value(v) -> str:
    if v is True:
        return "true"
    if v is False:
        return "false"
    return str(v)


def _outcome(o: dict) -> str:
    if o["outcome"] == "value":
        return f"Value({_value(o['value'])})"
    if o["outcome"] == "thrown":
        return f"Thrown({o['exception']})"
    return f"Fault({o['kind']})"


def _table(header: list[str], rows: list[list[str]]) -> list[str]:
    widths = [max(len(str(x)) for x in col) for col in zip(header, *rows)]
    fmt = lambda row: "  ".join(str(c).ljust(w) for c, w in zip(row, widths)).rstrip()
    return [fmt(header), fmt(["-" * w for w in widths])] + [fmt(r) for r in rows]


def _rows(kind: str, group: list[dict]) -> list[str]:
    if kind == "test":
        return _table(["case", "subcontract", "verdict", "reason", "observed"],
                      [[r["case"], r["subcontract"] or "-", r["verdict"], r["reason"] or "",
                        _outcome(r["observed"])] for r in group])
    if kind == "mutant":
        return _table(["id", "op", "line:col", "change", "status", "killed by"],
                      [[r["id"], r["operator"], f"{r['line']}:{r['column']}", r["description"],
                        r["status"], r["killed_by"] or "-"] for r in group])
    if kind == "submission":
        return _table(["submission", "correctness", "tests", "completeness", "lints"],
                      [[r["id"], percent(r["correctness"]), r["test_validity"],
                        percent(r["completeness"]), " ".join(r["lints"]) or "-"] for r in group])
    if kind == "lint":
        return _table(["lint", "subcontract", "message"],
                      [[r["code"], r["subcontract"], r["message"]] for r in group])
    lines = []
    for r in group:
        lines.extend(_single(r))
    return lines


def _single(r: dict) -> list[str]:
    kind = r["kind"]
    if kind == "contract":
        flags = "".join(f", {f}" for f in ("robust", "pure") if r[f])
        n = len(r["subcontracts"])
        return [f"{r['source']}: {n} subcontract{'s' if n != 1 else ''}{flags} "
                f"({', '.join(r['subcontracts'])})"]
    if kind == "analysis":
        if r["check"] == "disjointness":
            verdict = "disjoint" if not r["overlaps"] else f"{r['overlaps']} overlapping pair(s)"
        else:
            verdict = "fully covered" if not r["uncovered"] else f"{r['uncovered']} uncovered witness(es)"
        extra = f", {r['faults']} precondition fault(s)" if r["faults"] else ""
        return [f"{r['check']}: {verdict} over {r['points_checked']} points{extra}"]
    if kind == "overlap":
        return [f"  overlap {r['first']!r} / {r['second']!r} at {_bindings(r['witness'])}"]
    if kind == "uncovered":
        return [f"  uncovered input {_bindings(r['witness'])}"]
    if kind == "precondition_fault":
        return [f"  precondition of {r['subcontract']!r} faults ({r['fault']}) at "
                f"{_bindings(r['witness'])}"]
    if kind == "suite_written":
        return [f"wrote {r['cases']} test cases for {r['function']} to {r['path']}"]
    if kind == "suite_result":
        return [f"passed {r['passed']}/{r['total']} ({percent(r['pass_fraction'])}), "
                f"failed {r['failed']}, errors {r['errored']}"]
    if kind == "mutation_summary":
        verdict = "complete" if r["complete"] else f"{r['survived']} survivor(s)"
        return [f"mutation score {r['score']} ({percent(r['score'])}): {r['killed']}/{r['total']} "
                f"killed, {r['killed_by_timeout']} by timeout; {verdict}"]
    if kind == "cohort":
        out = [f"cohort: {r['submissions']} submissions, {r['testing']} with tests, "
               f"{r['non_testing']} without"]
        for metric in ("correctness", "correctness_testing", "correctness_non_testing",
                       "completeness"):
            m = r[metric]
            out.append(f"  {metric:<24} n={m['n']:<3} average {percent(m['average']):>7}  "
                       f"median {percent(m['median']):>7}")
        return out
    if kind == "warning":
        return [f"warning: {r['message']}"]
    if kind == "diagnostic":
        where = f"{r['source']}:" if r.get("source") else ""
        return [f"{where}{r['line']}:{r['column']}: {r['severity']} {r['code']}: {r['message']}"]
    return [dumps(r)]


def render(records: list[dict]) -> str:
    lines: list[str] = []
    for kind, group in groupby(records, key=lambda r: r["kind"]):
        lines.extend(_rows(kind, list(group)))
    return "\n".join(lines) + ("\n" if lines else "")
