"""MiniFn: a small statically-typed language for candidate implementations."""

from .interp import DEFAULT_FUEL, check_args, eval_call
from .parser import ParseError, parse, parse_type
from .printer import print_expr, print_function
from .syntax import (
    BOOL,
    FLOAT,
    INT,
    INT64_MAX,
    INT64_MIN,
    STR,
    BoolV,
    BudgetExhausted,
    ErrorKind,
    ErrorOutcome,
    FloatV,
    FunctionDef,
    IntV,
    ListV,
    Outcome,
    StrV,
    Type,
    Value,
    ValueOutcome,
    canon,
    canon_args,
    list_of,
    outcome_class,
    outcome_eq,
    outcome_summary,
    type_of,
    types_compatible,
    values_equal,
)
from .typecheck import TypeError_, typecheck

__all__ = [
    "BOOL", "BudgetExhausted", "BoolV", "DEFAULT_FUEL", "ErrorKind",
    "ErrorOutcome", "FLOAT", "FloatV", "FunctionDef", "INT", "INT64_MAX",
    "INT64_MIN", "IntV", "ListV", "Outcome", "ParseError", "STR", "StrV",
    "Type", "TypeError_", "Value", "ValueOutcome", "canon", "canon_args",
    "check_args", "eval_call", "list_of", "outcome_class", "outcome_eq",
    "outcome_summary", "parse", "parse_type", "print_expr", "print_function",
    "type_of", "typecheck", "types_compatible", "values_equal",
]
