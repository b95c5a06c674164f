"""Parsed contract values."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Union

from contractkit.contract.predicate import Predicate

TYPES = ("int", "bool")


@dataclass(frozen=True)
class Param:
    name: str
    type: str


@dataclass(frozen=True)
class Signature:
    return_type: str
    name: str
    params: tuple[Param, ...]
    throws: tuple[str, ...] = ()

    @property
    def param_names(self) -> tuple[str, ...]:
        return tuple(p.name for p in self.params)

    def type_of(self, name: str) -> str:
        for p in self.params:
            if p.name == name:
                return p.type
        raise KeyError(name)


@dataclass(frozen=True)
class Ensures:
    predicate: Predicate


@dataclass(frozen=True)
class Signals:
    exception: str


Behavior = Union[Ensures, Signals]


@dataclass(frozen=True)
class SubContract:
    name: str
    requires: Predicate
    behavior: Behavior


@dataclass(frozen=True)
class Specification:
    description: str
    signature: Signature
    subcontracts: tuple[SubContract, ...]
    robust: bool = False
    pure: bool = False

    @property
    def function(self) -> str:
        return self.signature.name

    def subcontract(self, name: str) -> SubContract:
        for sub in self.subcontracts:
            if sub.name == name:
                return sub
        raise KeyError(name)

    def summary(self) -> str:
        n = len(self.subcontracts)
        parts = [f"{n} subcontract{'s' if n != 1 else ''}"]
        if self.robust:
            parts.append("robust")
        if self.pure:
            parts.append("pure")
        return ", ".join(parts)
