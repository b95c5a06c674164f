"""Canonical text form of a Specification."""

from __future__ import annotations

from contractkit.contract.model import Ensures, Specification
from contractkit.contract.predicate import format_predicate


def pretty_print(spec: Specification) -> str:
    lines = ["/**"]
    if spec.description:
        lines += [f" * @desc {spec.description}", " *"]
    for sub in spec.subcontracts:
        lines.append(f" * @sub {sub.name} {{")
        lines.append(f" *   @requires {format_predicate(sub.requires)};")
        if isinstance(sub.behavior, Ensures):
            lines.append(f" *   @ensures {format_predicate(sub.behavior.predicate)};")
        else:
            lines.append(f" *   @signals {sub.behavior.exception};")
        lines += [" * }", " *"]
    if spec.robust:
        lines.append(" * @robust")
    if spec.pure:
        lines.append(" * @pure")
    if lines[-1] == " *":
        lines.pop()
    lines.append(" */")
    sig = spec.signature
    params = ", ".join(f"{p.type} {p.name}" for p in sig.params)
    head = f"{sig.return_type} {sig.name}({params})"
    if sig.throws:
        head += " throws " + ", ".join(sig.throws)
    lines.append(head)
    return "\n".join(lines) + "\n"
