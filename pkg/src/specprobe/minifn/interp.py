"""Deterministic, fuel-bounded tree-walking evaluator for MiniFn.

Every AST-node evaluation costs one unit of fuel; running out yields
BudgetExhausted. All failure modes surface as Outcome variants, never as
host exceptions.
"""

from __future__ import annotations

import math
from typing import Dict, List, Sequence

from .syntax import (
    BOOL,
    FLOAT,
    INT,
    INT64_MAX,
    INT64_MIN,
    STR,
    Assign,
    BinOp,
    BoolLit,
    BoolV,
    BudgetExhausted,
    Call,
    ErrorKind,
    ErrorOutcome,
    Expr,
    FloatLit,
    FloatV,
    For,
    FunctionDef,
    If,
    Index,
    IntLit,
    IntV,
    Let,
    ListLit,
    ListV,
    Outcome,
    Raise,
    Return,
    Stmt,
    StrLit,
    StrV,
    Type,
    UnOp,
    Value,
    ValueOutcome,
    Var,
    While,
    type_of,
    types_compatible,
)

DEFAULT_FUEL = 100_000


class _Signal(Exception):
    pass


class _OutOfFuel(_Signal):
    pass


class _RuntimeFail(_Signal):
    def __init__(self, kind: ErrorKind, message: str = ""):
        self.kind = kind
        self.message = message


class _ReturnSignal(_Signal):
    def __init__(self, value: Value):
        self.value = value


def _check_int(n: int) -> int:
    if n < INT64_MIN or n > INT64_MAX:
        raise _RuntimeFail(ErrorKind.OVERFLOW, "integer overflow")
    return n


def _trunc_div(a: int, b: int) -> int:
    if b == 0:
        raise _RuntimeFail(ErrorKind.DIVISION_BY_ZERO, "division by zero")
    q = abs(a) // abs(b)
    return q if (a >= 0) == (b >= 0) else -q


def _trunc_mod(a: int, b: int) -> int:
    if b == 0:
        raise _RuntimeFail(ErrorKind.DIVISION_BY_ZERO, "modulo by zero")
    return a - _trunc_div(a, b) * b


class _Interp:
    def __init__(self, fuel: int):
        self.fuel = fuel

    def tick(self) -> None:
        self.fuel -= 1
        if self.fuel < 0:
            raise _OutOfFuel()

    # -- expressions

    def eval(self, e: Expr, env: Dict[str, Value]) -> Value:
        # tick() inlined: this dispatcher is the hottest path in the system
        fuel = self.fuel - 1
        if fuel < 0:
            raise _OutOfFuel()
        self.fuel = fuel
        cls = e.__class__
        if cls is Var:
            return env[e.name]
        if cls is BinOp:
            return self._binop(e, env)
        if cls is IntLit:
            return IntV(e.n)
        if cls is Call:
            return self._call(e, env)
        if cls is Index:
            return self._index(self.eval(e.seq, env), self.eval(e.idx, env))
        if cls is FloatLit:
            return FloatV(e.x)
        if cls is BoolLit:
            return BoolV(e.b)
        if cls is StrLit:
            return StrV(e.s)
        if cls is ListLit:
            return ListV(tuple(self.eval(it, env) for it in e.items))
        if cls is UnOp:
            v = self.eval(e.operand, env)
            if e.op == "not":
                assert isinstance(v, BoolV)
                return BoolV(not v.b)
            if v.__class__ is IntV:
                return IntV(_check_int(-v.n))
            assert isinstance(v, FloatV)
            return FloatV(-v.x)
        raise AssertionError(f"unknown expression {e!r}")

    def _index(self, seq: Value, idx: Value) -> Value:
        assert isinstance(idx, IntV)
        i = idx.n
        if isinstance(seq, ListV):
            if i < 0 or i >= len(seq.items):
                raise _RuntimeFail(ErrorKind.INDEX_OUT_OF_RANGE, f"index {i} out of range")
            return seq.items[i]
        assert isinstance(seq, StrV)
        if i < 0 or i >= len(seq.s):
            raise _RuntimeFail(ErrorKind.INDEX_OUT_OF_RANGE, f"index {i} out of range")
        return StrV(seq.s[i])

    def _call(self, e: Call, env: Dict[str, Value]) -> Value:
        v = self.eval(e.args[0], env)
        if e.fn == "len":
            if isinstance(v, ListV):
                return IntV(len(v.items))
            assert isinstance(v, StrV)
            return IntV(len(v.s))
        if e.fn == "abs":
            if isinstance(v, IntV):
                return IntV(_check_int(abs(v.n)))
            assert isinstance(v, FloatV)
            return FloatV(abs(v.x))
        assert e.fn == "is_nan"
        assert isinstance(v, FloatV)
        return BoolV(math.isnan(v.x))

    def _binop(self, e: BinOp, env: Dict[str, Value]) -> Value:
        op = e.op
        if op == "and":
            lv = self.eval(e.left, env)
            assert isinstance(lv, BoolV)
            if not lv.b:
                return BoolV(False)
            rv = self.eval(e.right, env)
            assert isinstance(rv, BoolV)
            return rv
        if op == "or":
            lv = self.eval(e.left, env)
            assert isinstance(lv, BoolV)
            if lv.b:
                return BoolV(True)
            rv = self.eval(e.right, env)
            assert isinstance(rv, BoolV)
            return rv
        a = self.eval(e.left, env)
        b = self.eval(e.right, env)
        if op == "==":
            return BoolV(_strict_eq(a, b))
        if op == "!=":
            return BoolV(not _strict_eq(a, b))
        if op == "<" or op == "<=" or op == ">" or op == ">=":
            return BoolV(_order(op, a, b))
        # arithmetic / concatenation
        if a.__class__ is IntV and b.__class__ is IntV:
            if op == "+":
                return IntV(_check_int(a.n + b.n))
            if op == "-":
                return IntV(_check_int(a.n - b.n))
            if op == "*":
                return IntV(_check_int(a.n * b.n))
            if op == "/":
                return IntV(_check_int(_trunc_div(a.n, b.n)))
            return IntV(_trunc_mod(a.n, b.n))
        if a.__class__ is FloatV and b.__class__ is FloatV:
            if op == "+":
                return FloatV(a.x + b.x)
            if op == "-":
                return FloatV(a.x - b.x)
            if op == "*":
                return FloatV(a.x * b.x)
            if op == "/":
                return FloatV(_ieee_div(a.x, b.x))
            # IEEE remainder semantics: fmod(inf, y) and fmod(x, 0) are NaN,
            # which math.fmod reports as a domain error instead.
            if math.isinf(a.x) or b.x == 0.0:
                return FloatV(float("nan"))
            return FloatV(math.fmod(a.x, b.x))
        if isinstance(a, StrV) and isinstance(b, StrV):
            assert op == "+"
            return StrV(a.s + b.s)
        assert isinstance(a, ListV) and isinstance(b, ListV) and op == "+"
        return ListV(a.items + b.items, a.elem_type or b.elem_type)

    # -- statements

    def exec_block(self, stmts: Sequence[Stmt], env: Dict[str, Value]) -> None:
        for s in stmts:
            self.exec(s, env)

    def exec(self, s: Stmt, env: Dict[str, Value]) -> None:
        fuel = self.fuel - 1
        if fuel < 0:
            raise _OutOfFuel()
        self.fuel = fuel
        cls = s.__class__
        if cls is Assign or cls is Let:
            env[s.name] = self.eval(s.expr, env)
        elif cls is If:
            cond = self.eval(s.cond, env)
            assert isinstance(cond, BoolV)
            self.exec_block(s.then if cond.b else s.els, env)
        elif cls is While:
            while True:
                cond = self.eval(s.cond, env)
                assert isinstance(cond, BoolV)
                if not cond.b:
                    break
                self.exec_block(s.body, env)
        elif cls is Return:
            raise _ReturnSignal(self.eval(s.expr, env))
        elif cls is For:
            seq = self.eval(s.seq, env)
            assert isinstance(seq, ListV)
            for item in seq.items:
                self.tick()
                env[s.var] = item
                self.exec_block(s.body, env)
        elif cls is Raise:
            msg = self.eval(s.msg, env)
            assert isinstance(msg, StrV)
            raise _RuntimeFail(ErrorKind.USER_RAISED, msg.s)
        else:
            raise AssertionError(f"unknown statement {s!r}")


def _strict_eq(a: Value, b: Value) -> bool:
    """MiniFn ==: IEEE semantics on floats (NaN unequal to everything)."""
    cls = a.__class__
    if cls is not b.__class__:
        raise AssertionError("comparison of mismatched value kinds")
    if cls is IntV:
        return a.n == b.n
    if cls is FloatV:
        return a.x == b.x  # nan != nan, -0.0 == 0.0
    if cls is BoolV:
        return a.b == b.b
    if cls is StrV:
        return a.s == b.s
    assert cls is ListV
    return len(a.items) == len(b.items) and all(
        _strict_eq(x, y) for x, y in zip(a.items, b.items)
    )


def _order(op: str, a: Value, b: Value):
    cls = a.__class__
    if cls is IntV:
        x, y = a.n, b.n  # type: ignore[union-attr]
    elif cls is FloatV:
        x, y = a.x, b.x  # type: ignore[union-attr]
    else:
        assert isinstance(a, StrV) and isinstance(b, StrV)
        x, y = a.s, b.s
    if op == "<":
        return x < y
    if op == "<=":
        return x <= y
    if op == ">":
        return x > y
    return x >= y


def _ieee_div(a: float, b: float) -> float:
    if b == 0.0:
        if a == 0.0 or math.isnan(a):
            return float("nan")
        sign = math.copysign(1.0, a) * math.copysign(1.0, b)
        return math.inf * sign
    try:
        return a / b
    except OverflowError:  # pragma: no cover - CPython returns inf itself
        return math.copysign(math.inf, a) * math.copysign(1.0, b)


def check_args(fd: FunctionDef, args: Sequence[Value]) -> None:
    """Validate arity and argument types against the signature."""
    if len(args) != len(fd.params):
        raise ValueError(f"{fd.name} expects {len(fd.params)} argument(s), got {len(args)}")
    for (name, ty), v in zip(fd.params, args):
        if not types_compatible(type_of(v), ty):
            raise ValueError(f"argument {name!r} expects {ty}, got {type_of(v)}")


def eval_call(fd: FunctionDef, args: Sequence[Value], fuel: int = DEFAULT_FUEL) -> Outcome:
    """Run a function on concrete arguments under a step budget.

    Pure and deterministic: the same (fd, args, fuel) always produces the
    same Outcome.
    """
    check_args(fd, args)
    env: Dict[str, Value] = {name: v for (name, _), v in zip(fd.params, args)}
    interp = _Interp(fuel)
    try:
        interp.exec_block(fd.body, env)
    except _ReturnSignal as r:
        return ValueOutcome(r.value)
    except _RuntimeFail as f:
        return ErrorOutcome(f.kind, f.message)
    except _OutOfFuel:
        return BudgetExhausted()
    # unreachable for typechecked programs (definite-return analysis), but
    # stay total on raw ASTs
    return ErrorOutcome(ErrorKind.USER_RAISED, "function ended without returning")
