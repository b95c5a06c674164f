"""Bounded exhaustive checks of a contract's subcontract preconditions.

Disjointness: no input may satisfy two preconditions. Coverage (for
``@robust`` contracts): every input must satisfy at least one. Both are
decided by enumerating a finite Domain in lexicographic order, so every
reported witness is the first offending point in that order.
"""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass
from typing import Iterator

from contractkit.contract import Signature, Specification, compile_predicate
from contractkit.contract.predicate import EvalFault
from contractkit.diagnostics import UsageError

DEFAULT_CAP = 1_000_000
MAX_UNCOVERED = 10


class DomainError(UsageError):
    pass


@dataclass(frozen=True)
class Domain:
    """Inclusive integer interval per int parameter; bool parameters take both values."""

    names: tuple[str, ...]
    types: tuple[str, ...]
    bounds: tuple[tuple[int, int] | None, ...]
    cap: int = DEFAULT_CAP

    def __post_init__(self):
        for name, t, b in zip(self.names, self.types, self.bounds):
            if t == "int" and (b is None or b[0] > b[1]):
                raise DomainError(f"empty or missing interval for {name!r}: {b}")
        if self.size > self.cap:
            raise DomainError(f"domain has {self.size} points, over the cap of {self.cap}")

    @classmethod
    def uniform(cls, signature: Signature, lo: int, hi: int, cap: int = DEFAULT_CAP,
                overrides: dict[str, tuple[int, int]] | None = None) -> "Domain":
        overrides = overrides or {}
        unknown = set(overrides) - set(signature.param_names)
        if unknown:
            raise DomainError(f"no parameter named {sorted(unknown)[0]!r}")
        bounds = tuple(None if p.type == "bool" else overrides.get(p.name, (lo, hi))
                       for p in signature.params)
        return cls(signature.param_names, tuple(p.type for p in signature.params), bounds, cap)

    def values(self, name: str) -> list:
        i = self.names.index(name)
        if self.types[i] == "bool":
            return [False, True]
        lo, hi = self.bounds[i]
        return list(range(lo, hi + 1))

    def interval(self, name: str) -> tuple[int, int]:
        return self.bounds[self.names.index(name)]

    @property
    def size(self) -> int:
        n = 1
        for t, b in zip(self.types, self.bounds):
            n *= 2 if t == "bool" else b[1] - b[0] + 1
        return n

    def points(self) -> Iterator[tuple]:
        return itertools.product(*(self.values(n) for n in self.names))

    def contains(self, point: tuple) -> bool:
        if len(point) != len(self.names):
            return False
        for v, t, b in zip(point, self.types, self.bounds):
            if t == "bool":
                if not isinstance(v, bool):
                    return False
            elif isinstance(v, bool) or not b[0] <= v <= b[1]:
                return False
        return True

    def describe(self) -> str:
        parts = []
        for n, t, b in zip(self.names, self.types, self.bounds):
            parts.append(f"{n}=bool" if t == "bool" else f"{n}={b[0]}..{b[1]}")
        return " ".join(parts)


_RANGE = re.compile(r"^\s*(?:(?P<name>[A-Za-z_]\w*)\s*=\s*)?(?P<lo>-?\d+)\s*\.\.\s*(?P<hi>-?\d+)\s*$")


def parse_domain(signature: Signature, texts: list[str] | str, cap: int = DEFAULT_CAP) -> Domain:
    """Build a Domain from strings like ``-50..50`` (all params) or ``y=0..10``."""
    if isinstance(texts, str):
        texts = texts.replace(",", " ").split()
    default = None
    overrides = {}
    for text in texts:
        m = _RANGE.match(text)
        if not m:
            raise DomainError(f"bad domain {text!r}; expected LO..HI or NAME=LO..HI")
        lo, hi = int(m["lo"]), int(m["hi"])
        if m["name"]:
            overrides[m["name"]] = (lo, hi)
        else:
            default = (lo, hi)
    if default is None:
        missing = [p.name for p in signature.params
                   if p.type == "int" and p.name not in overrides]
        if missing:
            raise DomainError(f"no interval given for {missing[0]!r}")
        default = (0, 0)
    return Domain.uniform(signature, default[0], default[1], cap, overrides)


@dataclass(frozen=True)
class Overlap:
    first: str
    second: str
    witness: tuple


@dataclass(frozen=True)
class PreconditionFault:
    subcontract: str
    witness: tuple
    kind: str


@dataclass(frozen=True)
class AnalysisReport:
    names: tuple[str, ...]
    overlaps: tuple[Overlap, ...] = ()
    uncovered: tuple[tuple, ...] = ()
    faults: tuple[PreconditionFault, ...] = ()
    points_checked: int = 0

    @property
    def clean(self) -> bool:
        return not (self.overlaps or self.uncovered or self.faults)

    def bindings(self, witness: tuple) -> dict:
        return dict(zip(self.names, witness))

    def records(self, check: str) -> list[dict]:
        out = [{"kind": "analysis", "check": check, "points_checked": self.points_checked,
                "overlaps": len(self.overlaps), "uncovered": len(self.uncovered),
                "faults": len(self.faults)}]
        for o in self.overlaps:
            out.append({"kind": "overlap", "first": o.first, "second": o.second,
                        "witness": self.bindings(o.witness)})
        for w in self.uncovered:
            out.append({"kind": "uncovered", "witness": self.bindings(w)})
        for f in self.faults:
            out.append({"kind": "precondition_fault", "subcontract": f.subcontract,
                        "witness": self.bindings(f.witness), "fault": f.kind})
        return out


def _matching(spec: Specification, domain: Domain):
    """Yield (point, indices of satisfied subcontracts, faults at that point)."""
    if domain.names != spec.signature.param_names:
        raise DomainError("domain parameters do not match the signature")
    checks = [compile_predicate(s.requires, domain.names) for s in spec.subcontracts]
    for point in domain.points():
        hits = []
        faults = []
        for i, check in enumerate(checks):
            try:
                if check(point):
                    hits.append(i)
            except EvalFault as exc:
                faults.append((i, exc.kind))
        yield point, hits, faults


def check_disjointness(spec: Specification, domain: Domain) -> AnalysisReport:
    subs = spec.subcontracts
    witnesses: dict[tuple[int, int], tuple] = {}
    faults: dict[int, PreconditionFault] = {}
    count = 0
    for point, hits, point_faults in _matching(spec, domain):
        count += 1
        for i, kind in point_faults:
            faults.setdefault(i, PreconditionFault(subs[i].name, point, kind))
        if len(hits) > 1:
            for pair in itertools.combinations(hits, 2):
                witnesses.setdefault(pair, point)
    overlaps = tuple(Overlap(subs[a].name, subs[b].name, w)
                     for (a, b), w in sorted(witnesses.items(), key=lambda kv: (kv[1], kv[0])))
    return AnalysisReport(domain.names, overlaps, (),
                          tuple(faults[i] for i in sorted(faults)), count)


def check_coverage(spec: Specification, domain: Domain) -> AnalysisReport:
    """Points in ``domain`` that satisfy no precondition (at most ten are kept)."""
    if not spec.robust:
        raise UsageError("coverage is only defined for @robust contracts")
    subs = spec.subcontracts
    uncovered = []
    faults: dict[int, PreconditionFault] = {}
    count = 0
    for point, hits, point_faults in _matching(spec, domain):
        count += 1
        for i, kind in point_faults:
            faults.setdefault(i, PreconditionFault(subs[i].name, point, kind))
        if not hits and len(uncovered) < MAX_UNCOVERED:
            uncovered.append(point)
    return AnalysisReport(domain.names, (), tuple(uncovered),
                          tuple(faults[i] for i in sorted(faults)), count)
