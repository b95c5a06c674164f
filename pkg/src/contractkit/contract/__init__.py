"""The contract notation: parsing, printing and predicate evaluation."""

from contractkit.contract.model import (
    Behavior, Ensures, Param, Signals, Signature, Specification, SubContract, TYPES,
)
from contractkit.contract.parser import parse_predicate, parse_spec, tokenize
from contractkit.contract.predicate import (
    RESULT, Binary, BoolLit, EvalFault, IntLit, Predicate, UnboundIdentifier, Unary, Var,
    atomic_comparisons, compile_predicate, constant_value, eval_predicate, format_predicate,
    free_names,
)
from contractkit.contract.printer import pretty_print

__all__ = [
    "Behavior", "Binary", "BoolLit", "Ensures", "EvalFault", "IntLit", "Param", "Predicate",
    "RESULT", "Signals", "Signature", "Specification", "SubContract", "TYPES",
    "UnboundIdentifier", "Unary", "Var", "atomic_comparisons", "compile_predicate", "constant_value",
    "eval_predicate", "format_predicate", "free_names", "parse_predicate", "parse_spec",
    "pretty_print", "tokenize",
]
