"""Type-directed random input generation, input sizing, and greedy shrinking.

Generation is a pure function of (config, stream position), so parallel
workers can partition positions without sharing state. Shrinking is a
deterministic greedy descent over a fixed move set, counting predicate
evaluations against a budget.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass, field
from typing import Callable, Iterator, List, Sequence, Tuple

from .minifn.syntax import (
    INT64_MAX,
    INT64_MIN,
    BoolV,
    FloatV,
    IntV,
    ListV,
    StrV,
    Type,
    Value,
    canon_args,
)

_MIX = 0x9E3779B97F4A7C15


@dataclass(frozen=True)
class GenConfig:
    seed: int = 0
    max_list_len: int = 8
    max_str_len: int = 8
    int_range: Tuple[int, int] = (-1000, 1000)
    trials_per_target: int = 200
    special_value_bias: float = 0.25

    def __post_init__(self):
        if self.trials_per_target < 1:
            raise ValueError("trials_per_target must be >= 1")
        if not 0.0 <= self.special_value_bias <= 1.0:
            raise ValueError("special_value_bias must be in [0, 1]")


def special_values(ty: Type, int_bounds: Tuple[int, int] = (INT64_MIN, INT64_MAX)) -> List[Value]:
    """Curated adversarial pool per type; int max/min follow int_bounds."""
    if ty.kind == "int":
        lo, hi = int_bounds
        seen: List[Value] = []
        for n in (0, 1, -1, hi, lo):
            if lo <= n <= hi and IntV(n) not in seen:
                seen.append(IntV(n))
        return seen
    if ty.kind == "float":
        return [
            FloatV(0.0), FloatV(-0.0), FloatV(1.0), FloatV(-1.0),
            FloatV(math.nan), FloatV(math.inf), FloatV(-math.inf),
        ]
    if ty.kind == "str":
        return [StrV(""), StrV(" "), StrV("a")]
    if ty.kind == "bool":
        return [BoolV(True), BoolV(False)]
    if ty.kind == "list":
        assert ty.elem is not None
        pool: List[Value] = [ListV((), ty.elem)]
        pool.extend(ListV((s,), ty.elem) for s in special_values(ty.elem, int_bounds))
        return pool
    raise ValueError(f"no generator for type {ty}")


_ALPHABET = " abcxyz01"


def _random_value(ty: Type, rng: random.Random, cfg: GenConfig) -> Value:
    if rng.random() < cfg.special_value_bias:
        return rng.choice(special_values(ty, cfg.int_range))
    if ty.kind == "int":
        return IntV(rng.randint(*cfg.int_range))
    if ty.kind == "float":
        if rng.random() < 0.5:
            return FloatV(float(rng.randint(-100, 100)))
        return FloatV(rng.uniform(-1000.0, 1000.0))
    if ty.kind == "bool":
        return BoolV(rng.random() < 0.5)
    if ty.kind == "str":
        n = rng.randint(0, cfg.max_str_len)
        return StrV("".join(rng.choice(_ALPHABET) for _ in range(n)))
    if ty.kind == "list":
        assert ty.elem is not None
        n = rng.randint(0, cfg.max_list_len)
        return ListV(tuple(_random_value(ty.elem, rng, cfg) for _ in range(n)), ty.elem)
    raise ValueError(f"no generator for type {ty}")


def generate(ty: Type, cfg: GenConfig, position: int) -> Value:
    """Deterministically produce the value at `position` in the stream."""
    rng = random.Random((cfg.seed * _MIX + position) & 0xFFFFFFFFFFFFFFFF)
    return _random_value(ty, rng, cfg)


def generate_args(types: Sequence[Type], cfg: GenConfig, position: int) -> List[Value]:
    rng = random.Random((cfg.seed * _MIX + position) & 0xFFFFFFFFFFFFFFFF)
    return [_random_value(t, rng, cfg) for t in types]


def special_arg_tuples(types: Sequence[Type], cfg: GenConfig, cap: int = 64) -> List[List[Value]]:
    """Deterministic cross product of per-parameter special pools, capped.

    Tried before random trials so that pool-only divergences are found
    regardless of seed.
    """
    tuples: List[List[Value]] = [[]]
    for t in types:
        pool = special_values(t, cfg.int_range)
        tuples = [prev + [v] for prev in tuples for v in pool]
        if len(tuples) > cap:
            tuples = tuples[:cap]
    return tuples[:cap]


# ---------------------------------------------------------------------------
# Size metric


@dataclass(frozen=True, order=True)
class SizeScore:
    total: int
    tiebreak: str = field(default="")


def value_size(v: Value) -> int:
    if isinstance(v, IntV):
        return 1 + len(str(abs(v.n)))
    if isinstance(v, FloatV):
        if v.x == 0.0:
            return 1
        return 2  # finite, nan and inf all weigh the same
    if isinstance(v, BoolV):
        return 1
    if isinstance(v, StrV):
        return 1 + len(v.s)
    if isinstance(v, ListV):
        return 1 + sum(value_size(it) for it in v.items)
    raise TypeError(f"not a Value: {v!r}")


def size(args: Sequence[Value]) -> SizeScore:
    """Total order on argument tuples: smaller is simpler."""
    return SizeScore(sum(value_size(a) for a in args), canon_args(args))


# ---------------------------------------------------------------------------
# Shrinking


def _int_moves(n: int) -> List[Value]:
    if n == 0:
        return []
    out: List[int] = []
    for m in (0, n - (1 if n > 0 else -1), int(n / 2)):
        if m != n and m not in out:
            out.append(m)
    return [IntV(m) for m in out]


def _float_moves(x: float) -> List[Value]:
    if math.isnan(x):
        return [FloatV(0.0)]  # tried last among a value's moves by position
    out: List[Value] = []
    for m in (0.0, 1.0):
        if not (x == m and math.copysign(1.0, x) == math.copysign(1.0, m)):
            out.append(FloatV(m))
    return out


def _str_moves(s: str) -> List[Value]:
    if not s:
        return []
    cands = ["", s[: len(s) // 2], s[:-1]]
    out: List[Value] = []
    seen = set()
    for c in cands:
        if c != s and c not in seen:
            seen.add(c)
            out.append(StrV(c))
    return out


def value_moves(v: Value) -> List[Value]:
    """Single-step simplifications, structural moves first."""
    if isinstance(v, ListV):
        moves: List[Value] = []
        items = v.items
        for i in range(len(items)):
            moves.append(ListV(items[:i] + items[i + 1 :], v.elem_type))
        if len(items) > 1:
            moves.append(ListV(items[: len(items) // 2], v.elem_type))
        for i, it in enumerate(items):
            for m in value_moves(it):
                moves.append(ListV(items[:i] + (m,) + items[i + 1 :], v.elem_type))
        return moves
    if isinstance(v, IntV):
        return _int_moves(v.n)
    if isinstance(v, FloatV):
        return _float_moves(v.x)
    if isinstance(v, StrV):
        return _str_moves(v.s)
    return []


def _arg_moves(args: Sequence[Value]) -> Iterator[List[Value]]:
    for i, a in enumerate(args):
        for m in value_moves(a):
            yield [*args[:i], m, *args[i + 1 :]]


def shrink(
    args: Sequence[Value],
    keep: Callable[[Sequence[Value]], bool],
    budget: int = 1000,
) -> List[Value]:
    """Greedy first-improvement descent to a locally minimal keeper.

    Requires keep(args) to hold. Counts keep() evaluations against the
    budget and returns the best keeper found when it runs out.
    """
    current = list(args)
    current_score = size(current)
    spent = 0
    improved = True
    while improved and spent < budget:
        improved = False
        for cand in _arg_moves(current):
            cand_score = size(cand)
            if cand_score >= current_score:
                continue
            if spent >= budget:
                break
            spent += 1
            if keep(cand):
                current = cand
                current_score = cand_score
                improved = True
                break
    return current
