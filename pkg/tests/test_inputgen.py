"""Input generation: determinism, special pools, the size metric, shrinking."""

import math

import pytest
from hypothesis import given, settings, strategies as st

from specprobe.inputgen import (
    GenConfig,
    SizeScore,
    generate,
    generate_args,
    shrink,
    size,
    special_arg_tuples,
    special_values,
    value_moves,
    value_size,
)
from specprobe.minifn.syntax import (
    BOOL,
    FLOAT,
    INT,
    STR,
    BoolV,
    FloatV,
    IntV,
    ListV,
    StrV,
    canon_args,
    list_of,
    type_of,
)

ALL_TYPES = [INT, FLOAT, BOOL, STR, list_of(INT), list_of(FLOAT), list_of(list_of(INT))]


# ---------------------------------------------------------------------------
# Generation


@pytest.mark.parametrize("ty", ALL_TYPES, ids=str)
def test_generate_is_pure_in_seed_and_position(ty):
    cfg = GenConfig(seed=7)
    for pos in range(50):
        a = generate(ty, cfg, pos)
        b = generate(ty, cfg, pos)
        assert canon_args([a]) == canon_args([b])


def test_positions_are_independent_streams():
    # asking for position 10 directly equals asking for it after 0..9
    cfg = GenConfig(seed=3)
    direct = generate(list_of(INT), cfg, 10)
    _ = [generate(list_of(INT), cfg, p) for p in range(10)]
    again = generate(list_of(INT), cfg, 10)
    assert canon_args([direct]) == canon_args([again])


def test_different_seeds_give_different_streams():
    a = [canon_args([generate(INT, GenConfig(seed=1), p)]) for p in range(40)]
    b = [canon_args([generate(INT, GenConfig(seed=2), p)]) for p in range(40)]
    assert a != b


@pytest.mark.parametrize("ty", ALL_TYPES, ids=str)
def test_generated_values_are_well_typed(ty):
    from specprobe.minifn.syntax import types_compatible

    cfg = GenConfig(seed=0)
    for pos in range(100):
        assert types_compatible(type_of(generate(ty, cfg, pos)), ty)


def test_generate_respects_bounds():
    cfg = GenConfig(seed=5, max_list_len=3, max_str_len=2, int_range=(-4, 4))
    for pos in range(200):
        v = generate(list_of(INT), cfg, pos)
        assert len(v.items) <= 3
        assert all(-4 <= it.n <= 4 for it in v.items)
        s = generate(STR, cfg, pos)
        assert len(s.s) <= 2


def test_generate_args_matches_arity():
    args = generate_args([INT, FLOAT, STR], GenConfig(seed=0), 0)
    assert [type_of(a).kind for a in args] == ["int", "float", "str"]


def test_special_bias_extremes():
    only_special = GenConfig(seed=0, special_value_bias=1.0)
    pool = {canon_args([v]) for v in special_values(FLOAT)}
    for pos in range(50):
        assert canon_args([generate(FLOAT, only_special, pos)]) in pool


def test_gen_config_validation():
    with pytest.raises(ValueError):
        GenConfig(trials_per_target=0)
    with pytest.raises(ValueError):
        GenConfig(special_value_bias=1.5)


# ---------------------------------------------------------------------------
# Special pools


def test_float_special_pool_contents():
    xs = [v.x for v in special_values(FLOAT)]
    assert any(math.isnan(x) for x in xs)
    assert math.inf in xs and -math.inf in xs
    assert any(x == 0.0 and math.copysign(1.0, x) < 0 for x in xs)


def test_int_special_pool_uses_configured_bounds():
    pool = {v.n for v in special_values(INT, (-4, 4))}
    assert pool == {0, 1, -1, 4, -4}
    tiny = {v.n for v in special_values(INT, (2, 3))}
    assert tiny == {3, 2}


def test_list_special_pool_has_empty_and_singletons():
    pool = special_values(list_of(FLOAT))
    assert pool[0].items == ()
    assert all(len(v.items) <= 1 for v in pool)
    assert any(len(v.items) == 1 and math.isnan(v.items[0].x) for v in pool)


def test_special_arg_tuples_cap_and_determinism():
    cfg = GenConfig()
    tuples = special_arg_tuples([FLOAT, FLOAT], cfg)
    assert len(tuples) == 49  # 7 x 7, under the cap
    assert tuples == special_arg_tuples([FLOAT, FLOAT], cfg)
    capped = special_arg_tuples([FLOAT, FLOAT, FLOAT], cfg, cap=64)
    assert len(capped) == 64


# ---------------------------------------------------------------------------
# Size metric


@pytest.mark.parametrize("v,expected", [
    (IntV(0), 2),
    (IntV(7), 2),
    (IntV(-7), 2),
    (IntV(120), 4),
    (FloatV(0.0), 1),
    (FloatV(-0.0), 1),
    (FloatV(3.7), 2),
    (FloatV(float("nan")), 2),
    (FloatV(float("inf")), 2),
    (BoolV(True), 1),
    (StrV(""), 1),
    (StrV("abc"), 4),
    (ListV((), FLOAT), 1),
    (ListV((FloatV(0.0), FloatV(3.7), FloatV(0.0)), FLOAT), 5),
])
def test_value_size_table(v, expected):
    assert value_size(v) == expected


def test_size_is_a_total_order_with_canon_tiebreak():
    a = size([ListV((), FLOAT)])
    b = size([ListV((FloatV(0.0),), FLOAT)])
    assert a < b
    # equal totals break ties on canonical text, so distinct args never compare equal
    x = size([IntV(3)])
    y = size([IntV(4)])
    assert x.total == y.total and x != y and (x < y or y < x)


def test_size_score_is_orderable_dataclass():
    assert SizeScore(1, "a") < SizeScore(2, "")
    assert SizeScore(2, "a") < SizeScore(2, "b")


# ---------------------------------------------------------------------------
# Shrinking


def _keep_len_ge(n):
    return lambda args: isinstance(args[0], ListV) and len(args[0].items) >= n


def test_shrink_reaches_minimal_list():
    big = ListV(tuple(IntV(i) for i in range(6)), INT)
    out = shrink([big], _keep_len_ge(2))
    assert canon_args(out) == "[0, 0]"


def test_shrink_requires_keeper_and_never_breaks_predicate():
    start = [ListV((FloatV(5.5), FloatV(float("nan"))), FLOAT)]

    def keep(args):
        return any(isinstance(it, FloatV) and math.isnan(it.x) for it in args[0].items)

    out = shrink(start, keep)
    assert keep(out)
    assert canon_args(out) == "[nan]"


def test_shrink_result_never_larger_than_input():
    start = [IntV(-987), StrV("hello")]
    out = shrink(start, lambda args: True)
    assert size(out) <= size(start)


def test_shrink_budget_limits_keep_calls():
    calls = []

    def keep(args):
        calls.append(1)
        return True

    shrink([ListV(tuple(IntV(9) for _ in range(8)), INT)], keep, budget=5)
    assert len(calls) <= 5


def test_value_moves_strictly_decrease_size():
    samples = [
        IntV(100), IntV(-3), FloatV(float("nan")), FloatV(2.5), StrV("abcd"),
        ListV((IntV(1), IntV(22)), INT),
    ]
    for v in samples:
        for m in value_moves(v):
            assert value_size(m) <= value_size(v)


@given(st.lists(st.integers(min_value=-50, max_value=50), max_size=5))
@settings(max_examples=50, deadline=None)
def test_shrink_fixpoint_property(xs):
    """Shrinking an already shrunk input changes nothing."""
    start = [ListV(tuple(IntV(n) for n in xs), INT)]

    def keep(args):
        return len(args[0].items) == len(xs)

    once = shrink(start, keep)
    twice = shrink(once, keep)
    assert canon_args(once) == canon_args(twice)
