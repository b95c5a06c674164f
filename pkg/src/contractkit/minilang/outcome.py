"""Results of running a function: a value, a thrown exception, or a fault."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Union

FAULT_KINDS = ("overflow", "div_by_zero", "fuel_exhausted")


@dataclass(frozen=True)
class Value:
    value: Union[int, bool]

    def __str__(self):
        v = self.value
        return f"Value({'true' if v is True else 'false' if v is False else v})"

    def as_record(self) -> dict:
        return {"outcome": "value", "value": self.value}


@dataclass(frozen=True)
class Thrown:
    exception: str

    def __str__(self):
        return f"Thrown({self.exception})"

    def as_record(self) -> dict:
        return {"outcome": "thrown", "exception": self.exception}


@dataclass(frozen=True)
class Fault:
    kind: str

    def __post_init__(self):
        if self.kind not in FAULT_KINDS:
            raise ValueError(f"unknown fault kind {self.kind!r}")

    def __str__(self):
        return f"Fault({self.kind})"

    def as_record(self) -> dict:
        return {"outcome": "fault", "kind": self.kind}


Outcome = Union[Value, Thrown, Fault]


def outcome_from_record(record: dict) -> Outcome:
    kind = record["outcome"]
    if kind == "value":
        return Value(record["value"])
    if kind == "thrown":
        return Thrown(record["exception"])
    return Fault(record["kind"])
