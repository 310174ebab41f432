"""Canonical pretty-printer for MiniFn ASTs.

The printed form is the AST's identity: two defs are structurally equal
iff they print identically, and parse(print(ast)) == ast.
"""

from __future__ import annotations

from .syntax import (
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
    UnOp,
    Var,
    While,
    _str_literal,
    float_literal,
)

_PREC = {
    "or": 1,
    "and": 2,
    "==": 4, "!=": 4, "<": 4, "<=": 4, ">": 4, ">=": 4,
    "+": 5, "-": 5,
    "*": 6, "/": 6, "%": 6,
}


def print_expr(e: Expr, parent_prec: int = 0) -> str:
    if isinstance(e, IntLit):
        return str(e.n)
    if isinstance(e, FloatLit):
        return float_literal(e.x)
    if isinstance(e, BoolLit):
        return "true" if e.b else "false"
    if isinstance(e, StrLit):
        return _str_literal(e.s)
    if isinstance(e, ListLit):
        return "[" + ", ".join(print_expr(it) for it in e.items) + "]"
    if isinstance(e, Var):
        return e.name
    if isinstance(e, Index):
        return f"{print_expr(e.seq, 8)}[{print_expr(e.idx)}]"
    if isinstance(e, Call):
        return f"{e.fn}(" + ", ".join(print_expr(a) for a in e.args) + ")"
    if isinstance(e, UnOp):
        prec = 3 if e.op == "not" else 7
        inner = print_expr(e.operand, prec)
        text = f"not {inner}" if e.op == "not" else f"-{inner}"
        return f"({text})" if prec < parent_prec else text
    if isinstance(e, BinOp):
        prec = _PREC[e.op]
        text = f"{print_expr(e.left, prec)} {e.op} {print_expr(e.right, prec + 1)}"
        return f"({text})" if prec < parent_prec else text
    raise TypeError(f"not an expression: {e!r}")


def _print_stmt(s: Stmt, indent: int, out: list) -> None:
    pad = "    " * indent
    if isinstance(s, Let):
        out.append(f"{pad}let {s.name} = {print_expr(s.expr)};")
    elif isinstance(s, Assign):
        out.append(f"{pad}{s.name} = {print_expr(s.expr)};")
    elif isinstance(s, Return):
        out.append(f"{pad}return {print_expr(s.expr)};")
    elif isinstance(s, Raise):
        out.append(f"{pad}raise({print_expr(s.msg)});")
    elif isinstance(s, If):
        out.append(f"{pad}if {print_expr(s.cond)} {{")
        for st in s.then:
            _print_stmt(st, indent + 1, out)
        if s.els:
            out.append(f"{pad}}} else {{")
            for st in s.els:
                _print_stmt(st, indent + 1, out)
        out.append(f"{pad}}}")
    elif isinstance(s, While):
        out.append(f"{pad}while {print_expr(s.cond)} {{")
        for st in s.body:
            _print_stmt(st, indent + 1, out)
        out.append(f"{pad}}}")
    elif isinstance(s, For):
        out.append(f"{pad}for {s.var} in {print_expr(s.seq)} {{")
        for st in s.body:
            _print_stmt(st, indent + 1, out)
        out.append(f"{pad}}}")
    else:
        raise TypeError(f"not a statement: {s!r}")


def print_function(fd: FunctionDef) -> str:
    out = [f"{fd.signature()} {{"]
    for s in fd.body:
        _print_stmt(s, 1, out)
    out.append("}")
    return "\n".join(out) + "\n"
