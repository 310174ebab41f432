"""AST-level mutant generation for augmenting a suggestion space.

Five operators: AOR (arithmetic), ROR (relational), COR (and/or),
CRP (constant replacement), RVR (return-value replacement). Every mutant
differs from its parent at exactly one site, still typechecks, and is
AST-distinct from the parent.
"""

from __future__ import annotations

import dataclasses
from dataclasses import dataclass
from enum import Enum
from typing import List, Optional, Sequence, Tuple

from .minifn.printer import print_function
from .minifn.syntax import (
    BinOp,
    BoolLit,
    Expr,
    FloatLit,
    For,
    FunctionDef,
    If,
    IntLit,
    ListLit,
    Return,
    Stmt,
    StrLit,
    Type,
    While,
)
from .minifn.typecheck import TypeError_, typecheck


class MutationOperator(Enum):
    AOR = "arithmetic operator replacement"
    ROR = "relational operator replacement"
    COR = "conditional operator replacement"
    CRP = "constant replacement"
    RVR = "return value replacement"


_OP_ORDER = {op: i for i, op in enumerate(MutationOperator)}

_ARITH = ("+", "-", "*", "/", "%")
_REL = ("<", "<=", ">", ">=", "==", "!=")


@dataclass(frozen=True)
class Mutant:
    def_: FunctionDef
    parent_id: str
    operator: MutationOperator
    site: int  # preorder index of the rewritten node


def _default_expr(t: Type) -> Expr:
    if t.kind == "int":
        return IntLit((0, 0), 0)
    if t.kind == "float":
        return FloatLit((0, 0), 0.0)
    if t.kind == "bool":
        return BoolLit((0, 0), False)
    if t.kind == "str":
        return StrLit((0, 0), "")
    return ListLit((0, 0), ())


def _local_rewrites(node, return_type: Type) -> List[Tuple[MutationOperator, object]]:
    out: List[Tuple[MutationOperator, object]] = []
    if isinstance(node, BinOp):
        if node.op in _ARITH:
            for op in _ARITH:
                if op != node.op:
                    out.append((MutationOperator.AOR, dataclasses.replace(node, op=op)))
        elif node.op in _REL:
            for op in _REL:
                if op != node.op:
                    out.append((MutationOperator.ROR, dataclasses.replace(node, op=op)))
        elif node.op in ("and", "or"):
            out.append((MutationOperator.COR, dataclasses.replace(node, op="or" if node.op == "and" else "and")))
    elif isinstance(node, IntLit):
        for c in (0, 1, node.n + 1):
            if c != node.n:
                out.append((MutationOperator.CRP, dataclasses.replace(node, n=c)))
    elif isinstance(node, FloatLit):
        for c in (0.0, 1.0):
            if not (node.x == c and str(node.x) == str(c)):
                out.append((MutationOperator.CRP, dataclasses.replace(node, x=c)))
    elif isinstance(node, StrLit):
        if node.s != "":
            out.append((MutationOperator.CRP, dataclasses.replace(node, s="")))
    elif isinstance(node, Return):
        default = _default_expr(return_type)
        out.append((MutationOperator.RVR, dataclasses.replace(node, expr=default)))
    return out


_Path = Tuple[Tuple[str, Optional[int]], ...]


def _children(node) -> List[Tuple[str, Optional[int], object]]:
    out: List[Tuple[str, Optional[int], object]] = []
    for f in dataclasses.fields(node):
        if f.name == "pos":
            continue
        v = getattr(node, f.name)
        if isinstance(v, (Expr, Stmt)):
            out.append((f.name, None, v))
        elif isinstance(v, tuple):
            for i, item in enumerate(v):
                if isinstance(item, (Expr, Stmt)):
                    out.append((f.name, i, item))
    return out


def _preorder(node, path: _Path, acc: List[Tuple[_Path, object]]) -> None:
    acc.append((path, node))
    for fname, idx, child in _children(node):
        _preorder(child, path + (((fname, idx)),), acc)


def _rebuild(node, path: _Path, replacement):
    if not path:
        return replacement
    (fname, idx), rest = path[0], path[1:]
    v = getattr(node, fname)
    if idx is None:
        new_v = _rebuild(v, rest, replacement)
    else:
        new_v = v[:idx] + (_rebuild(v[idx], rest, replacement),) + v[idx + 1 :]
    return dataclasses.replace(node, **{fname: new_v})


def mutate_all(fd: FunctionDef, parent_id: str = "", cap: int = 40) -> List[Mutant]:
    """All single-site mutants of a typechecked definition.

    Type-invalid and parent-identical mutants are discarded. Results are
    ordered by (operator, site preorder index) and truncated to cap.
    """
    sites: List[Tuple[_Path, object]] = []
    for i, stmt in enumerate(fd.body):
        _preorder(stmt, (("body", i),), sites)
    parent_text = print_function(fd)
    raw: List[Tuple[int, int, FunctionDef]] = []
    for site_idx, (path, node) in enumerate(sites):
        for op, new_node in _local_rewrites(node, fd.return_type):
            (bname, bidx), rest = path[0], path[1:]
            new_body = fd.body[:bidx] + (_rebuild(fd.body[bidx], rest, new_node),) + fd.body[bidx + 1 :]
            new_def = dataclasses.replace(fd, body=new_body)
            raw.append((_OP_ORDER[op], site_idx, new_def))
    raw.sort(key=lambda t: (t[0], t[1]))
    out: List[Mutant] = []
    seen = {parent_text}
    for op_idx, site_idx, new_def in raw:
        if len(out) >= cap:
            break
        text = print_function(new_def)
        if text in seen:
            continue
        try:
            typecheck(new_def)
        except TypeError_:
            continue
        seen.add(text)
        out.append(Mutant(new_def, parent_id, list(MutationOperator)[op_idx], site_idx))
    return out
