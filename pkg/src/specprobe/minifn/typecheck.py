"""Static checker for MiniFn function definitions.

Scoping is lexical: a block sees enclosing bindings, and bindings made
inside a block are dropped at its end. Every code path must end in a
return or a raise; a `while true` loop counts as non-falling-through.
"""

from __future__ import annotations

from typing import Dict, Optional

from .syntax import (
    BOOL,
    FLOAT,
    INT,
    STR,
    Assign,
    BinOp,
    BoolLit,
    Call,
    Expr,
    FloatLit,
    For,
    FunctionDef,
    If,
    Index,
    IntLit,
    Let,
    ListLit,
    Raise,
    Return,
    Stmt,
    StrLit,
    Type,
    UnOp,
    Var,
    While,
    types_compatible,
)


class TypeError_(Exception):
    """Raised on an ill-typed definition; carries the offending location."""

    def __init__(self, message: str, pos):
        line, col = pos
        super().__init__(f"{line}:{col}: {message}")
        self.message = message
        self.pos = pos


_NUMERIC = (INT, FLOAT)


def _infer(e: Expr, env: Dict[str, Type]) -> Type:
    if isinstance(e, IntLit):
        return INT
    if isinstance(e, FloatLit):
        return FLOAT
    if isinstance(e, BoolLit):
        return BOOL
    if isinstance(e, StrLit):
        return STR
    if isinstance(e, ListLit):
        if not e.items:
            return Type("list", None)
        first = _infer(e.items[0], env)
        for it in e.items[1:]:
            t = _infer(it, env)
            if not types_compatible(first, t):
                raise TypeError_(f"mixed element types in list literal: {first} vs {t}", it.pos)
            if first.kind == "list" and first.elem is None:
                first = t
        return Type("list", first)
    if isinstance(e, Var):
        if e.name not in env:
            raise TypeError_(f"unbound variable {e.name!r}", e.pos)
        return env[e.name]
    if isinstance(e, Index):
        seq_t = _infer(e.seq, env)
        idx_t = _infer(e.idx, env)
        if idx_t != INT:
            raise TypeError_(f"index must be Int, got {idx_t}", e.idx.pos)
        if seq_t.kind == "list":
            if seq_t.elem is None:
                raise TypeError_("cannot index a list of unknown element type", e.pos)
            return seq_t.elem
        if seq_t == STR:
            return STR
        raise TypeError_(f"cannot index into {seq_t}", e.pos)
    if isinstance(e, Call):
        if e.fn == "len":
            _expect_arity(e, 1)
            t = _infer(e.args[0], env)
            if t.kind != "list" and t != STR:
                raise TypeError_(f"len() takes a List or Str, got {t}", e.pos)
            return INT
        if e.fn == "abs":
            _expect_arity(e, 1)
            t = _infer(e.args[0], env)
            if t not in _NUMERIC:
                raise TypeError_(f"abs() takes an Int or Float, got {t}", e.pos)
            return t
        if e.fn == "is_nan":
            _expect_arity(e, 1)
            t = _infer(e.args[0], env)
            if t != FLOAT:
                raise TypeError_(f"is_nan() takes a Float, got {t}", e.pos)
            return BOOL
        raise TypeError_(f"unknown builtin {e.fn!r}", e.pos)
    if isinstance(e, UnOp):
        t = _infer(e.operand, env)
        if e.op == "not":
            if t != BOOL:
                raise TypeError_(f"'not' takes a Bool, got {t}", e.pos)
            return BOOL
        if e.op == "-":
            if t not in _NUMERIC:
                raise TypeError_(f"unary '-' takes an Int or Float, got {t}", e.pos)
            return t
        raise TypeError_(f"unknown unary operator {e.op!r}", e.pos)
    if isinstance(e, BinOp):
        lt = _infer(e.left, env)
        rt = _infer(e.right, env)
        op = e.op
        if op in ("and", "or"):
            if lt != BOOL or rt != BOOL:
                raise TypeError_(f"{op!r} takes Bools, got {lt} and {rt}", e.pos)
            return BOOL
        if op in ("==", "!="):
            if not types_compatible(lt, rt):
                raise TypeError_(f"cannot compare {lt} with {rt}", e.pos)
            return BOOL
        if op in ("<", "<=", ">", ">="):
            if lt != rt or lt not in (INT, FLOAT, STR):
                raise TypeError_(f"cannot order {lt} with {rt}", e.pos)
            return BOOL
        if op == "+":
            if lt == rt and lt in (INT, FLOAT, STR):
                return lt
            if lt.kind == "list" and types_compatible(lt, rt):
                return lt if lt.elem is not None else rt
            raise TypeError_(f"cannot add {lt} and {rt}", e.pos)
        if op in ("-", "*"):
            if lt == rt and lt in _NUMERIC:
                return lt
            raise TypeError_(f"cannot apply {op!r} to {lt} and {rt}", e.pos)
        if op in ("/", "%"):
            if lt == rt and lt in _NUMERIC:
                return lt
            raise TypeError_(f"cannot apply {op!r} to {lt} and {rt}", e.pos)
        raise TypeError_(f"unknown operator {op!r}", e.pos)
    raise TypeError_(f"unknown expression {e!r}", getattr(e, "pos", (0, 0)))


def _expect_arity(e: Call, n: int) -> None:
    if len(e.args) != n:
        raise TypeError_(f"{e.fn}() takes {n} argument(s), got {len(e.args)}", e.pos)


def _check_block(stmts, env: Dict[str, Type], ret: Type) -> None:
    local = dict(env)
    for s in stmts:
        _check_stmt(s, local, ret)


def _check_stmt(s: Stmt, env: Dict[str, Type], ret: Type) -> None:
    if isinstance(s, Let):
        if s.name in env:
            raise TypeError_(f"{s.name!r} is already bound; assign with '='", s.pos)
        t = _infer(s.expr, env)
        if t.kind == "list" and t.elem is None:
            raise TypeError_("cannot infer the element type of []; bind a non-empty list first", s.pos)
        env[s.name] = t
    elif isinstance(s, Assign):
        if s.name not in env:
            raise TypeError_(f"assignment to unbound variable {s.name!r}", s.pos)
        t = _infer(s.expr, env)
        if not types_compatible(env[s.name], t):
            raise TypeError_(f"cannot assign {t} to {s.name!r}: {env[s.name]}", s.pos)
    elif isinstance(s, Return):
        t = _infer(s.expr, env)
        if not types_compatible(t, ret):
            raise TypeError_(f"return type mismatch: expected {ret}, got {t}", s.pos)
    elif isinstance(s, Raise):
        t = _infer(s.msg, env)
        if t != STR:
            raise TypeError_(f"raise() takes a Str message, got {t}", s.pos)
    elif isinstance(s, If):
        t = _infer(s.cond, env)
        if t != BOOL:
            raise TypeError_(f"if condition must be Bool, got {t}", s.pos)
        _check_block(s.then, env, ret)
        _check_block(s.els, env, ret)
    elif isinstance(s, While):
        t = _infer(s.cond, env)
        if t != BOOL:
            raise TypeError_(f"while condition must be Bool, got {t}", s.pos)
        _check_block(s.body, env, ret)
    elif isinstance(s, For):
        seq_t = _infer(s.seq, env)
        if seq_t.kind != "list":
            raise TypeError_(f"for iterates over a List, got {seq_t}", s.pos)
        if seq_t.elem is None:
            raise TypeError_("cannot iterate a list of unknown element type", s.pos)
        inner = dict(env)
        inner[s.var] = seq_t.elem
        for st in s.body:
            _check_stmt(st, inner, ret)
    else:
        raise TypeError_(f"unknown statement {s!r}", s.pos)


def _terminates(stmts) -> bool:
    """True if a block definitely ends in a return/raise on every path."""
    for s in stmts:
        if isinstance(s, (Return, Raise)):
            return True
        if isinstance(s, If) and s.els and _terminates(s.then) and _terminates(s.els):
            return True
        if isinstance(s, While) and isinstance(s.cond, BoolLit) and s.cond.b:
            return True
    return False


def typecheck(fd: FunctionDef) -> None:
    """Check a definition; raises TypeError_ on the first violation."""
    seen = set()
    env: Dict[str, Type] = {}
    for name, t in fd.params:
        if name in seen:
            raise TypeError_(f"duplicate parameter {name!r}", (0, 0))
        seen.add(name)
        env[name] = t
    _check_block(fd.body, env, fd.return_type)
    if not _terminates(fd.body):
        raise TypeError_("not every path returns or raises", (0, 0))
