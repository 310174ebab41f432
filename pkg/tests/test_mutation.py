"""Mutant generation: operator coverage, single-site edits, determinism."""

import dataclasses

import pytest

from specprobe.minifn.parser import parse
from specprobe.minifn.printer import print_function
from specprobe.minifn.typecheck import typecheck
from specprobe.mutation import Mutant, MutationOperator, mutate_all

RAISING_FIRST_NONZERO = """
fn first_nonzero(nums: List(Float)) -> Float {
    for num in nums {
        if num != 0.0 {
            return num;
        }
    }
    raise("no non-zero value");
}
"""


def fd_of(src):
    fd = parse(src)
    typecheck(fd)
    return fd


def diff_sites(a, b):
    """Count leaf positions where the printed token streams differ."""
    ta, tb = print_function(a).split(), print_function(b).split()
    if len(ta) != len(tb):
        return None  # structural change (e.g. RVR swapping an expression)
    return sum(1 for x, y in zip(ta, tb) if x != y)


def test_arithmetic_replacement_covers_all_operators():
    fd = fd_of("fn f(a: Int, b: Int) -> Int { return a + b; }")
    muts = [m for m in mutate_all(fd) if m.operator is MutationOperator.AOR]
    ops = {m.def_.body[0].expr.op for m in muts}
    assert ops == {"-", "*", "/", "%"}


def test_relational_replacement_covers_all_operators():
    fd = fd_of("fn f(a: Int, b: Int) -> Bool { return a < b; }")
    muts = [m for m in mutate_all(fd) if m.operator is MutationOperator.ROR]
    ops = {m.def_.body[0].expr.op for m in muts}
    assert ops == {"<=", ">", ">=", "==", "!="}


def test_conditional_replacement_swaps_and_or():
    fd = fd_of("fn f(a: Bool, b: Bool) -> Bool { return a and b; }")
    muts = [m for m in mutate_all(fd) if m.operator is MutationOperator.COR]
    assert len(muts) == 1
    assert muts[0].def_.body[0].expr.op == "or"


def test_constant_replacement_int_and_float():
    fd = fd_of("fn f() -> Int { return 5; }")
    ints = {m.def_.body[0].expr.n for m in mutate_all(fd)
            if m.operator is MutationOperator.CRP}
    assert {0, 1, 6} <= ints

    fd = fd_of("fn f() -> Float { return 2.5; }")
    floats = {m.def_.body[0].expr.x for m in mutate_all(fd)
              if m.operator is MutationOperator.CRP}
    assert floats == {0.0, 1.0}


def test_return_value_replacement_uses_type_default():
    fd = fd_of('fn f(s: Str) -> Str { return s; }')
    rvr = [m for m in mutate_all(fd) if m.operator is MutationOperator.RVR]
    assert len(rvr) == 1
    assert rvr[0].def_.body[0].expr.s == ""


def test_mutants_typecheck_and_differ_from_parent():
    fd = fd_of(RAISING_FIRST_NONZERO)
    parent = print_function(fd)
    muts = mutate_all(fd, parent_id="p0")
    assert len(muts) >= 8
    texts = set()
    for m in muts:
        typecheck(m.def_)  # must not raise
        text = print_function(m.def_)
        assert text != parent
        texts.add(text)
        assert m.parent_id == "p0"
    assert len(texts) == len(muts), "mutants must be pairwise distinct"


def test_each_mutant_differs_at_exactly_one_site():
    fd = fd_of(RAISING_FIRST_NONZERO)
    for m in mutate_all(fd):
        d = diff_sites(fd, m.def_)
        if d is not None:
            assert d == 1, print_function(m.def_)


def test_mutation_is_deterministic():
    fd = fd_of(RAISING_FIRST_NONZERO)
    a = [print_function(m.def_) for m in mutate_all(fd)]
    b = [print_function(m.def_) for m in mutate_all(fd)]
    assert a == b


def test_cap_truncates_in_stable_order():
    fd = fd_of(RAISING_FIRST_NONZERO)
    full = [print_function(m.def_) for m in mutate_all(fd, cap=100)]
    head = [print_function(m.def_) for m in mutate_all(fd, cap=3)]
    assert head == full[:3]
    assert len(head) == 3


def test_results_ordered_by_operator_then_site():
    fd = fd_of("fn f(a: Int, b: Int) -> Int { if a < b { return a + 1; } return b; }")
    muts = mutate_all(fd)
    keys = [(list(MutationOperator).index(m.operator), m.site) for m in muts]
    assert keys == sorted(keys)


def test_signature_is_never_mutated():
    fd = fd_of(RAISING_FIRST_NONZERO)
    for m in mutate_all(fd):
        assert m.def_.name == fd.name
        assert m.def_.params == fd.params
        assert m.def_.return_type == fd.return_type


def test_no_mutants_for_mutation_free_body():
    # a body with no operators, constants or returns worth replacing still
    # yields only well-typed variants; RVR always applies when a return exists
    fd = fd_of("fn f(x: Bool) -> Bool { return x; }")
    muts = mutate_all(fd)
    assert all(m.operator is MutationOperator.RVR for m in muts)
