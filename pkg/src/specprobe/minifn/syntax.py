"""Core data model for MiniFn: types, runtime values, AST nodes, outcomes.

Structural equality of ASTs is defined by the canonical pretty-printer
(see printer.py); node positions never participate in identity.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Optional, Tuple

INT64_MIN = -(2**63)
INT64_MAX = 2**63 - 1


# ---------------------------------------------------------------------------
# Types


@dataclass(frozen=True)
class Type:
    """A MiniFn type: one of int, float, bool, str, list(elem).

    A list type with elem=None is the "unknown element" type inferred for
    the empty list literal; it unifies with any list type during checking
    and never appears in a declared signature.
    """

    kind: str
    elem: Optional["Type"] = None

    def __str__(self) -> str:
        if self.kind == "list":
            return f"List({self.elem})" if self.elem is not None else "List(?)"
        return {"int": "Int", "float": "Float", "bool": "Bool", "str": "Str"}[self.kind]


INT = Type("int")
FLOAT = Type("float")
BOOL = Type("bool")
STR = Type("str")


def list_of(elem: Type) -> Type:
    return Type("list", elem)


def types_compatible(a: Type, b: Type) -> bool:
    """Structural equality, with the unknown list element as a wildcard."""
    if a.kind != b.kind:
        return False
    if a.kind != "list":
        return True
    if a.elem is None or b.elem is None:
        return True
    return types_compatible(a.elem, b.elem)


# ---------------------------------------------------------------------------
# Values


class Value:
    """Base class for runtime values. Compare via canon(), not ==."""

    __slots__ = ()


@dataclass(frozen=True)
class IntV(Value):
    n: int


@dataclass(frozen=True)
class FloatV(Value):
    x: float


@dataclass(frozen=True)
class BoolV(Value):
    b: bool


@dataclass(frozen=True)
class StrV(Value):
    s: str


@dataclass(frozen=True)
class ListV(Value):
    items: Tuple[Value, ...]
    elem_type: Optional[Type] = None


def float_literal(x: float) -> str:
    """Round-trippable MiniFn literal for a float, incl. nan/inf/-0.0."""
    if math.isnan(x):
        return "nan"
    if math.isinf(x):
        return "inf" if x > 0 else "-inf"
    r = repr(x)
    if "." not in r and "e" not in r and "E" not in r:
        r += ".0"
    return r


def _str_literal(s: str) -> str:
    out = ['"']
    for ch in s:
        if ch == '"':
            out.append('\\"')
        elif ch == "\\":
            out.append("\\\\")
        elif ch == "\n":
            out.append("\\n")
        elif ch == "\t":
            out.append("\\t")
        elif ch == "\r":
            out.append("\\r")
        elif ord(ch) < 0x20:
            out.append(f"\\u{ord(ch):04x}")
        else:
            out.append(ch)
    out.append('"')
    return "".join(out)


def canon(v: Value) -> str:
    """Canonical serialization of a value; bit-exact (distinguishes -0.0,
    keeps NaN) and usable as a MiniFn literal."""
    if isinstance(v, IntV):
        return str(v.n)
    if isinstance(v, FloatV):
        return float_literal(v.x)
    if isinstance(v, BoolV):
        return "true" if v.b else "false"
    if isinstance(v, StrV):
        return _str_literal(v.s)
    if isinstance(v, ListV):
        return "[" + ", ".join(canon(it) for it in v.items) + "]"
    raise TypeError(f"not a Value: {v!r}")


def canon_args(args: Tuple[Value, ...] | list) -> str:
    return ", ".join(canon(a) for a in args)


def values_equal(a: Value, b: Value) -> bool:
    """Bit-exact structural equality (NaN equals NaN, -0.0 != 0.0)."""
    return canon(a) == canon(b)


def type_of(v: Value) -> Type:
    if isinstance(v, IntV):
        return INT
    if isinstance(v, FloatV):
        return FLOAT
    if isinstance(v, BoolV):
        return BOOL
    if isinstance(v, StrV):
        return STR
    if isinstance(v, ListV):
        if v.elem_type is not None:
            return list_of(v.elem_type)
        if v.items:
            return list_of(type_of(v.items[0]))
        return Type("list", None)
    raise TypeError(f"not a Value: {v!r}")


# ---------------------------------------------------------------------------
# Outcomes


class ErrorKind(Enum):
    DIVISION_BY_ZERO = "DivisionByZero"
    INDEX_OUT_OF_RANGE = "IndexOutOfRange"
    USER_RAISED = "UserRaised"
    OVERFLOW = "Overflow"


class Outcome:
    __slots__ = ()


@dataclass(frozen=True)
class ValueOutcome(Outcome):
    value: Value


@dataclass(frozen=True)
class ErrorOutcome(Outcome):
    kind: ErrorKind
    message: str = ""


@dataclass(frozen=True)
class BudgetExhausted(Outcome):
    pass


def _eq_class(v: Value) -> str:
    # Like canon() but folds the float equality classes: every NaN is one
    # class, and -0.0 joins 0.0.
    if isinstance(v, FloatV):
        x = v.x
        if math.isnan(x):
            return "nan"
        if x == 0.0:
            return "0.0"
        return float_literal(x)
    if isinstance(v, ListV):
        return "[" + ", ".join(_eq_class(it) for it in v.items) + "]"
    return canon(v)


def outcome_class(o: Outcome) -> str:
    """Canonical key such that outcome_eq(a, b) iff keys are equal."""
    if isinstance(o, ValueOutcome):
        return "value:" + _eq_class(o.value)
    if isinstance(o, ErrorOutcome):
        return "error:" + o.kind.value
    if isinstance(o, BudgetExhausted):
        return "timeout"
    raise TypeError(f"not an Outcome: {o!r}")


def outcome_eq(a: Outcome, b: Outcome) -> bool:
    """Canonical outcome equivalence: NaN-class equality on floats (and
    +0.0 == -0.0), error kinds compared by kind only, timeouts equal."""
    return outcome_class(a) == outcome_class(b)


def outcome_summary(o: Outcome) -> str:
    """Short human-readable label for a behaviour class."""
    if isinstance(o, ValueOutcome):
        return canon(o.value)
    if isinstance(o, ErrorOutcome):
        return f"error({o.kind.value})"
    return "timeout"


# ---------------------------------------------------------------------------
# AST

Pos = Tuple[int, int]  # (line, col), 1-based


@dataclass(frozen=True)
class Expr:
    pos: Pos = field(default=(0, 0), compare=False, repr=False)


@dataclass(frozen=True)
class IntLit(Expr):
    n: int = 0


@dataclass(frozen=True)
class FloatLit(Expr):
    x: float = 0.0


@dataclass(frozen=True)
class BoolLit(Expr):
    b: bool = False


@dataclass(frozen=True)
class StrLit(Expr):
    s: str = ""


@dataclass(frozen=True)
class ListLit(Expr):
    items: Tuple[Expr, ...] = ()


@dataclass(frozen=True)
class Var(Expr):
    name: str = ""


@dataclass(frozen=True)
class Index(Expr):
    seq: Expr = None  # type: ignore[assignment]
    idx: Expr = None  # type: ignore[assignment]


@dataclass(frozen=True)
class BinOp(Expr):
    op: str = ""
    left: Expr = None  # type: ignore[assignment]
    right: Expr = None  # type: ignore[assignment]


@dataclass(frozen=True)
class UnOp(Expr):
    op: str = ""
    operand: Expr = None  # type: ignore[assignment]


@dataclass(frozen=True)
class Call(Expr):
    fn: str = ""  # one of the builtins: len, abs, is_nan
    args: Tuple[Expr, ...] = ()


@dataclass(frozen=True)
class Stmt:
    pos: Pos = field(default=(0, 0), compare=False, repr=False)


@dataclass(frozen=True)
class Let(Stmt):
    name: str = ""
    expr: Expr = None  # type: ignore[assignment]


@dataclass(frozen=True)
class Assign(Stmt):
    name: str = ""
    expr: Expr = None  # type: ignore[assignment]


@dataclass(frozen=True)
class If(Stmt):
    cond: Expr = None  # type: ignore[assignment]
    then: Tuple[Stmt, ...] = ()
    els: Tuple[Stmt, ...] = ()


@dataclass(frozen=True)
class While(Stmt):
    cond: Expr = None  # type: ignore[assignment]
    body: Tuple[Stmt, ...] = ()


@dataclass(frozen=True)
class For(Stmt):
    var: str = ""
    seq: Expr = None  # type: ignore[assignment]
    body: Tuple[Stmt, ...] = ()


@dataclass(frozen=True)
class Return(Stmt):
    expr: Expr = None  # type: ignore[assignment]


@dataclass(frozen=True)
class Raise(Stmt):
    msg: Expr = None  # type: ignore[assignment]


@dataclass(frozen=True)
class FunctionDef:
    name: str
    params: Tuple[Tuple[str, Type], ...]
    return_type: Type
    body: Tuple[Stmt, ...]

    def signature(self) -> str:
        ps = ", ".join(f"{n}: {t}" for n, t in self.params)
        return f"fn {self.name}({ps}) -> {self.return_type}"
