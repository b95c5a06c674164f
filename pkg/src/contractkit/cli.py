"""Command line entry point: ``contractkit <subcommand> ...``.

Structured records go to stdout, one JSON object per line; human tables
and diagnostics go to stderr (``--quiet`` drops the tables). Exit codes:
0 clean, 1 findings (failing tests, surviving mutants, analysis findings,
lints with ``--strict``), 2 usage or parse errors.
"""

from __future__ import annotations

import argparse
import logging
import re
import sys
from pathlib import Path

from contractkit import __version__
from contractkit.analysis import (
    DomainError, check_coverage, check_disjointness, parse_domain,
)
from contractkit.diagnostics import ParseError, UsageError
from contractkit.grader import (
    cohort_stats, grade_submission, load_bundle, load_program, load_spec, load_submission,
    load_suite,
)
from contractkit.minilang import DEFAULT_FUEL
from contractkit.mutation import OPERATORS, mutation_score, parse_operators
from contractkit.records import dump_lines, load_lines, render
from contractkit.runner import run_suite
from contractkit.testgen import (
    DEFAULT_INTERIOR, GenerationError, format_suite, generate_suite, lint_suite,
    relational_comparisons,
)

CLEAN, FINDINGS, USAGE = 0, 1, 2

_RANGE_ARG = re.compile(r"^(?:[A-Za-z_]\w*=)?-?\d+\.\.-?\d+$")


def _glue_domains(argv: list[str]) -> list[str]:
    """Turn ``--domain -8..8 y=0..3`` into ``--domain=-8..8,y=0..3``.

    argparse would otherwise read a leading ``-8..8`` as an unknown option.
    """
    out: list[str] = []
    i = 0
    while i < len(argv):
        tok = argv[i]
        i += 1
        if tok != "--domain":
            out.append(tok)
            continue
        ranges = []
        while i < len(argv) and _RANGE_ARG.match(argv[i]):
            ranges.append(argv[i])
            i += 1
        out.append("--domain=" + ",".join(ranges) if ranges else tok)
    return out


class _Output:
    def __init__(self, quiet: bool):
        self.quiet = quiet

    def emit(self, records: list[dict]) -> None:
        sys.stdout.write(dump_lines(records))
        sys.stdout.flush()
        if not self.quiet:
            sys.stderr.write(render(records))

    def problem(self, message: str) -> None:
        sys.stderr.write(f"contractkit: {message}\n")


def _existing(path: str) -> Path:
    p = Path(path)
    if not p.exists():
        raise UsageError(f"{path}: no such file")
    return p


def cmd_check(args, out: _Output) -> int:
    path = _existing(args.contract)
    spec = load_spec(path)
    domain = parse_domain(spec.signature, args.domain)
    records = [{"kind": "contract", "source": str(path), "function": spec.function,
                "subcontracts": [s.name for s in spec.subcontracts],
                "robust": spec.robust, "pure": spec.pure}]
    disjoint = check_disjointness(spec, domain)
    records += disjoint.records("disjointness")
    findings = not disjoint.clean
    if spec.robust:
        coverage = check_coverage(spec, domain)
        records += coverage.records("coverage")
        findings = findings or bool(coverage.uncovered)
    out.emit(records)
    return FINDINGS if findings else CLEAN


def cmd_gen(args, out: _Output) -> int:
    path = _existing(args.contract)
    spec = load_spec(path)
    domain = parse_domain(spec.signature, args.domain)
    suite = generate_suite(spec, domain, args.interior, args.seed)
    target = Path(args.output) if args.output else Path(path.stem + ".suite")
    target.write_text(format_suite(suite), encoding="utf-8")
    records = [{"kind": "warning",
                "message": f"{sub}: '{text}' compares two expressions; no boundary values derived"}
               for sub, text in relational_comparisons(spec)]
    records.append({"kind": "suite_written", "path": str(target), "function": suite.function,
                    "cases": len(suite.cases)})
    out.emit(records)
    return CLEAN


def cmd_run(args, out: _Output) -> int:
    program = load_program(_existing(args.impl))
    suite = load_suite(_existing(args.suite))
    spec = load_spec(_existing(args.contract))
    result = run_suite(program, suite, spec, args.fuel)
    out.emit([r.as_record() for r in result.results] + [result.summary_record()])
    return CLEAN if result.pass_fraction == 1 else FINDINGS


def cmd_lint(args, out: _Output) -> int:
    suite = load_suite(_existing(args.suite))
    spec = load_spec(_existing(args.contract))
    report = lint_suite(suite, spec, parse_domain(spec.signature, args.domain))
    out.emit([w.as_record() for w in report.warnings])
    return FINDINGS if (args.strict and report) else CLEAN


def cmd_mutate(args, out: _Output) -> int:
    program = load_program(_existing(args.impl))
    suite = load_suite(_existing(args.suite))
    spec = load_spec(_existing(args.contract))
    report = mutation_score(program, suite, spec, parse_operators(args.operators), args.fuel)
    out.emit([r.as_record() for r in report.results] + [report.summary_record()])
    return CLEAN if report.complete else FINDINGS


def cmd_grade(args, out: _Output) -> int:
    bundle = load_bundle(_existing(args.bundle))
    submissions = [load_submission(_existing(d)) for d in args.submissions]
    ids = [s.id for s in submissions]
    if len(set(ids)) != len(ids):
        raise UsageError("submission ids (directory names) must be unique")
    reports = sorted((grade_submission(bundle, s, args.fuel) for s in submissions),
                     key=lambda r: r.id)
    out.emit([r.as_record() for r in reports] + [cohort_stats(reports).as_record()])
    return CLEAN


def cmd_report(args, out: _Output) -> int:
    records = []
    for name in args.records:
        path = _existing(name)
        try:
            records += load_lines(path.read_text(encoding="utf-8"))
        except ValueError as exc:
            raise UsageError(f"{name}: {exc}") from None
    # re-rendering always shows the table, even with --quiet
    sys.stdout.write(render(records))
    return CLEAN


def cmd_serve(args, out: _Output) -> int:
    import uvicorn

    uvicorn.run("contractkit.service.app:app", host=args.host, port=args.port)
    return CLEAN


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="contractkit",
        description="Contract-driven test generation, execution, mutation analysis and grading.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("-q", "--quiet", action="store_true", help="suppress human tables")
    fuel = argparse.ArgumentParser(add_help=False)
    fuel.add_argument("--fuel", type=int, default=DEFAULT_FUEL,
                      help="execution budget per test run (default: %(default)s)")
    sub = parser.add_subparsers(dest="command", required=True, metavar="COMMAND")

    p = sub.add_parser("check", parents=[common], help="parse a contract and analyse its subcontracts")
    p.add_argument("contract")
    p.add_argument("--domain", default="-50..50",
                   help="LO..HI for every parameter and/or NAME=LO..HI (default: %(default)s)")
    p.set_defaults(run=cmd_check)

    p = sub.add_parser("gen", parents=[common], help="generate a .suite from a contract")
    p.add_argument("contract")
    p.add_argument("--domain", default="-8..8", help="(default: %(default)s)")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--interior", type=int, default=DEFAULT_INTERIOR,
                   help="pseudo-random interior cases per subcontract")
    p.add_argument("-o", "--output", help="suite file to write (default: <contract stem>.suite)")
    p.set_defaults(run=cmd_gen)

    p = sub.add_parser("run", parents=[common, fuel], help="run a suite against an implementation")
    p.add_argument("impl")
    p.add_argument("suite")
    p.add_argument("contract")
    p.set_defaults(run=cmd_run)

    p = sub.add_parser("lint", parents=[common], help="lint a suite for missing boundaries and cases")
    p.add_argument("suite")
    p.add_argument("contract")
    p.add_argument("--domain", default="-8..8", help="(default: %(default)s)")
    p.add_argument("--strict", action="store_true", help="exit 1 when there are lint warnings")
    p.set_defaults(run=cmd_lint)

    p = sub.add_parser("mutate", parents=[common, fuel], help="mutation score of a suite")
    p.add_argument("impl")
    p.add_argument("suite")
    p.add_argument("contract")
    p.add_argument("--operators", default=",".join(OPERATORS))
    p.set_defaults(run=cmd_mutate)

    p = sub.add_parser("grade", parents=[common], help="grade submission directories")
    p.add_argument("bundle")
    p.add_argument("submissions", nargs="+", metavar="SUBMISSION_DIR")
    p.add_argument("--fuel", type=int, default=None, help="override the bundle's fuel")
    p.set_defaults(run=cmd_grade)

    p = sub.add_parser("report", parents=[common], help="render stored records as tables")
    p.add_argument("records", nargs="+")
    p.set_defaults(run=cmd_report)

    p = sub.add_parser("serve", help="run the HTTP service")
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=8000)
    p.set_defaults(run=cmd_serve, quiet=False)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(_glue_domains(sys.argv[1:] if argv is None else list(argv)))
    except SystemExit as exc:
        return USAGE if exc.code not in (0, None) else CLEAN
    logging.basicConfig(level=logging.ERROR, format="%(levelname)s: %(message)s")
    out = _Output(args.quiet)
    if getattr(args, "fuel", None) is not None and args.fuel < 1:
        out.problem("--fuel must be positive")
        return USAGE
    try:
        return args.run(args, out)
    except ParseError as exc:
        for d in exc.diagnostics:
            sys.stderr.write(str(d) + "\n")
        return USAGE
    except GenerationError as exc:
        out.problem(str(exc))
        return USAGE
    except (UsageError, DomainError) as exc:
        out.problem(str(exc))
        return USAGE
    except OSError as exc:
        out.problem(f"{exc.filename or ''}: {exc.strerror}")
        return USAGE


if __name__ == "__main__":
    sys.exit(main())
