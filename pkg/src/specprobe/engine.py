"""The six-stage analysis pipeline over a suggestion space.

Stages: acquire candidates, augment with mutants, fuzz for crashing
inputs, trim by functional examples, search pairs for distinguishing
inputs, and collate witnesses into a report. Every randomized stage is a
pure function of the configured seed, and parallel evaluation merges at a
single join point in canonical order, so output is independent of worker
count.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace
from typing import Callable, Dict, List, Optional, Sequence, Tuple

from .acquisition import (
    AnyError,
    Candidate,
    FunctionSpec,
    Origin,
    OfflineProvider,
    build_prompt,
    candidate_id,
    fetch_candidates,
    validate_and_dedupe,
)
from .inputgen import GenConfig, SizeScore, generate_args, shrink, size, special_arg_tuples
from .minifn.interp import DEFAULT_FUEL, eval_call
from .minifn.printer import print_function
from .minifn.syntax import (
    BudgetExhausted,
    ErrorOutcome,
    Outcome,
    Value,
    ValueOutcome,
    canon_args,
    outcome_class,
    outcome_eq,
)
from .mutation import mutate_all
from .report import Report
from .inputgen import value_moves  # noqa: F401  (re-export convenience)

SHRINK_BUDGET = 500


class EmptySpace(Exception):
    """Every candidate fails some functional example; the examples are
    inconsistent or too strict."""


@dataclass(frozen=True)
class SuggestionSpace:
    candidates: Tuple[Candidate, ...]
    spec: FunctionSpec

    def __post_init__(self):
        ids = [c.id for c in self.candidates]
        if len(set(ids)) != len(ids):
            raise ValueError("candidate ids must be unique")


@dataclass(frozen=True)
class Witness:
    args: Tuple[Value, ...]
    partition: Dict[str, Outcome]
    score: SizeScore
    provenance: str  # fuzz_crash | pairwise

    def outcome_classes(self) -> Dict[str, List[str]]:
        """Map outcome class key -> candidate ids showing that behaviour."""
        classes: Dict[str, List[str]] = {}
        for cid in sorted(self.partition):
            classes.setdefault(outcome_class(self.partition[cid]), []).append(cid)
        return classes

    def is_nontrivial(self) -> bool:
        keys = {outcome_class(o) for o in self.partition.values()}
        if len(keys) >= 2:
            return True
        return any(not isinstance(o, ValueOutcome) for o in self.partition.values())


@dataclass(frozen=True)
class PipelineConfig:
    gen: GenConfig = field(default_factory=GenConfig)
    n_candidates: int = 10
    mutate: bool = True
    mutant_cap: int = 40
    mutant_cap_global: int = 200
    fuel: int = DEFAULT_FUEL
    workers: int = 1


class EvalCache:
    """Per-run memo of candidate outcomes keyed by canonical arguments.

    Shrink paths started from different inputs converge on the same small
    region, and every pipeline stage re-evaluates survivors on witness
    arguments, so sharing one table across stages removes most repeated
    interpreter calls. Evaluation is pure, so a cache hit is always exact.
    """

    def __init__(self, fuel: int = DEFAULT_FUEL):
        self.fuel = fuel
        self._tab: Dict[Tuple[str, str], Outcome] = {}

    def __call__(self, cand: Candidate, args: Sequence[Value]) -> Outcome:
        key = (cand.id, canon_args(tuple(args)))
        out = self._tab.get(key)
        if out is None:
            out = eval_call(cand.def_, args, self.fuel)
            self._tab[key] = out
        return out


def _evaluator(cache: Optional[EvalCache], fuel: int) -> Callable[[Candidate, Sequence[Value]], Outcome]:
    if cache is not None and cache.fuel == fuel:
        return cache
    return lambda cand, args: eval_call(cand.def_, args, fuel)


def _partition_on(
    space: SuggestionSpace, args: Sequence[Value], fuel: int,
    cache: Optional[EvalCache] = None,
) -> Dict[str, Outcome]:
    ev = _evaluator(cache, fuel)
    return {c.id: ev(c, args) for c in space.candidates}


def make_witness(
    space: SuggestionSpace, args: Sequence[Value], provenance: str, fuel: int,
    cache: Optional[EvalCache] = None,
) -> Witness:
    args_t = tuple(args)
    return Witness(args_t, _partition_on(space, args_t, fuel, cache), size(args_t), provenance)


def _map_maybe_parallel(fn: Callable, items: Sequence, workers: int) -> List:
    if workers <= 1 or len(items) <= 1:
        return [fn(it) for it in items]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, items))


# ---------------------------------------------------------------------------
# Stage 3: fuzz for crashing inputs


def fuzz_crashes(space: SuggestionSpace, cfg: GenConfig, fuel: int = DEFAULT_FUEL,
                 workers: int = 1, cache: Optional[EvalCache] = None) -> List[Witness]:
    """Hunt for inputs on which some candidate errors or times out; shrink
    each hit while that candidate still fails and record it."""
    types = space.spec.param_types
    ev = _evaluator(cache, fuel)

    def probe(item: Tuple[int, Candidate]) -> List[Tuple[Value, ...]]:
        idx, cand = item
        hits: List[Tuple[Value, ...]] = []
        seen = set()

        def fails(a: Sequence[Value]) -> bool:
            return not isinstance(ev(cand, a), ValueOutcome)

        inputs = [list(t) for t in special_arg_tuples(types, cfg)]
        base = idx * cfg.trials_per_target
        inputs.extend(generate_args(types, cfg, base + k) for k in range(cfg.trials_per_target))
        for args in inputs:
            if not fails(args):
                continue
            shrunk = tuple(shrink(args, fails, SHRINK_BUDGET))
            key = canon_args(shrunk)
            if key not in seen:
                seen.add(key)
                hits.append(shrunk)
        return hits

    per_cand = _map_maybe_parallel(probe, list(enumerate(space.candidates)), workers)
    witnesses: List[Witness] = []
    seen_args = set()
    for hits in per_cand:
        for args in hits:
            key = canon_args(args)
            if key in seen_args:
                continue
            seen_args.add(key)
            witnesses.append(make_witness(space, args, "fuzz_crash", fuel, cache))
    return witnesses


# ---------------------------------------------------------------------------
# Stage 4: trim by functional examples


def example_satisfied(cand: Candidate, ex, fuel: int = DEFAULT_FUEL) -> bool:
    out = eval_call(cand.def_, list(ex.args), fuel)
    if isinstance(ex.expected, AnyError):
        return isinstance(out, ErrorOutcome)
    return outcome_eq(out, ValueOutcome(ex.expected))


def filter_by_examples(space: SuggestionSpace, fuel: int = DEFAULT_FUEL) -> SuggestionSpace:
    """Keep exactly the candidates that satisfy every functional example."""
    if not space.spec.examples:
        return space
    survivors = tuple(
        c for c in space.candidates
        if all(example_satisfied(c, ex, fuel) for ex in space.spec.examples)
    )
    if space.candidates and not survivors:
        raise EmptySpace("no candidate satisfies all examples; they may be inconsistent or too strict")
    return replace(space, candidates=survivors)


# ---------------------------------------------------------------------------
# Stage 5: pairwise inequivalence search


def _pair_distinguished(known: Sequence[Witness], a: str, b: str) -> bool:
    for w in known:
        if a in w.partition and b in w.partition:
            if not outcome_eq(w.partition[a], w.partition[b]):
                return True
    return False


def pairwise_search(
    space: SuggestionSpace,
    cfg: GenConfig,
    known: Sequence[Witness] = (),
    fuel: int = DEFAULT_FUEL,
    workers: int = 1,
    cache: Optional[EvalCache] = None,
) -> List[Witness]:
    """For each candidate pair not already separated by a known witness,
    search for an input with inequivalent outcomes, shrinking hits."""
    cands = space.candidates
    types = space.spec.param_types
    pairs = [
        (i, j)
        for i in range(len(cands))
        for j in range(i + 1, len(cands))
        if not _pair_distinguished(known, cands[i].id, cands[j].id)
    ]

    ev = _evaluator(cache, fuel)

    # Screening every pair against the special-value cross product dominates
    # the cost, so evaluate each candidate on those tuples once up front.
    specials = [list(t) for t in special_arg_tuples(types, cfg)]
    special_outs = _map_maybe_parallel(
        lambda cand: [ev(cand, args) for args in specials],
        cands,
        workers,
    )
    sig = [tuple(outcome_class(o) for o in outs) for outs in special_outs]

    def disagrees_fn(i: int, j: int) -> Callable[[Sequence[Value]], bool]:
        def disagrees(args: Sequence[Value]) -> bool:
            return not outcome_eq(ev(cands[i], args), ev(cands[j], args))

        return disagrees

    # Pairs with different signatures always split on some special tuple.
    # Same-signature pairs can only be told apart by generated trials, so
    # those candidates share one stream per signature group: an equivalent
    # pair then costs one evaluation row instead of two evaluations per pair.
    split_pairs = [(i, j) for (i, j) in pairs if sig[i] != sig[j]]
    grouped: Dict[Tuple[str, ...], List[Tuple[int, int]]] = {}
    for i, j in pairs:
        if sig[i] == sig[j]:
            grouped.setdefault(sig[i], []).append((i, j))
    groups = sorted(grouped.values(), key=lambda ps: ps[0])

    def search_split(pair: Tuple[int, int]) -> Tuple[Value, ...]:
        i, j = pair
        for k, args in enumerate(specials):
            if not outcome_eq(special_outs[i][k], special_outs[j][k]):
                return tuple(shrink(args, disagrees_fn(i, j), SHRINK_BUDGET))
        raise AssertionError("signatures differ but no special tuple splits the pair")

    def search_group(
        item: Tuple[int, List[Tuple[int, int]]]
    ) -> Dict[Tuple[int, int], Tuple[Value, ...]]:
        gidx, gpairs = item
        base = (gidx + len(cands)) * cfg.trials_per_target
        pending = list(gpairs)
        results: Dict[Tuple[int, int], Tuple[Value, ...]] = {}
        for k in range(cfg.trials_per_target):
            if not pending:
                break
            args = generate_args(types, cfg, base + k)
            members = sorted({m for p in pending for m in p})
            outs = {m: ev(cands[m], args) for m in members}
            still: List[Tuple[int, int]] = []
            for i, j in pending:
                if outcome_eq(outs[i], outs[j]):
                    still.append((i, j))
                else:
                    results[(i, j)] = tuple(shrink(args, disagrees_fn(i, j), SHRINK_BUDGET))
            pending = still
        return results

    by_pair: Dict[Tuple[int, int], Tuple[Value, ...]] = dict(
        zip(split_pairs, _map_maybe_parallel(search_split, split_pairs, workers))
    )
    for results in _map_maybe_parallel(search_group, list(enumerate(groups)), workers):
        by_pair.update(results)

    witnesses: List[Witness] = []
    seen = {canon_args(w.args) for w in known}
    for pair in pairs:
        args = by_pair.get(pair)
        if args is None:
            continue
        key = canon_args(args)
        if key in seen:
            continue
        seen.add(key)
        witnesses.append(make_witness(space, args, "pairwise", fuel, cache))
    return witnesses


# ---------------------------------------------------------------------------
# Stage 1+2: acquisition and mutation


def build_space(spec: FunctionSpec, provider, cfg: PipelineConfig) -> Tuple[SuggestionSpace, List[str]]:
    origin_kind = "corpus" if isinstance(provider, OfflineProvider) else "llm"
    sources = fetch_candidates(build_prompt(spec), cfg.n_candidates, provider)
    candidates, diagnostics = validate_and_dedupe(sources, spec, origin_kind)
    return SuggestionSpace(tuple(candidates), spec), diagnostics


def add_mutants(space: SuggestionSpace, cfg: PipelineConfig) -> SuggestionSpace:
    ids = {c.id for c in space.candidates}
    extended = list(space.candidates)
    total = 0
    for parent in space.candidates:
        if total >= cfg.mutant_cap_global:
            break
        for m in mutate_all(parent.def_, parent.id, cfg.mutant_cap):
            if total >= cfg.mutant_cap_global:
                break
            mid = candidate_id(m.def_)
            if mid in ids:
                continue
            ids.add(mid)
            extended.append(
                Candidate(
                    mid,
                    print_function(m.def_),
                    m.def_,
                    Origin("mutant", parent.id, m.operator.name),
                )
            )
            total += 1
    return replace(space, candidates=tuple(extended))


# ---------------------------------------------------------------------------
# Stage 6: the full pipeline


def revalidate_witnesses(
    witnesses: Sequence[Witness], space: SuggestionSpace, fuel: int = DEFAULT_FUEL,
    cache: Optional[EvalCache] = None,
) -> List[Witness]:
    """Re-evaluate recorded witnesses against the (trimmed) space and keep
    only those that are still non-trivial there."""
    out: List[Witness] = []
    for w in witnesses:
        fresh = make_witness(space, w.args, w.provenance, fuel, cache)
        if fresh.is_nontrivial():
            out.append(fresh)
    return out


def collate(witnesses: Sequence[Witness]) -> List[Witness]:
    """Deduplicate by argument tuple and sort simplest-first."""
    by_args: Dict[str, Witness] = {}
    for w in witnesses:
        by_args.setdefault(canon_args(w.args), w)
    return sorted(by_args.values(), key=lambda w: w.score)


def run_pipeline(spec: FunctionSpec, provider, cfg: PipelineConfig = PipelineConfig()) -> Report:
    """Execute the full heuristic and build a report."""
    return run_pipeline_full(spec, provider, cfg)[0]


def run_pipeline_full(
    spec: FunctionSpec, provider, cfg: PipelineConfig = PipelineConfig()
) -> Tuple[Report, SuggestionSpace]:
    """Like run_pipeline, but also returns the trimmed suggestion space
    (needed by interactive sessions to re-trim later)."""
    space, diagnostics = build_space(spec, provider, cfg)
    n_fetched = len(space.candidates)
    if cfg.mutate:
        space = add_mutants(space, cfg)
    n_with_mutants = len(space.candidates)

    cache = EvalCache(cfg.fuel)
    crash = fuzz_crashes(space, cfg.gen, cfg.fuel, cfg.workers, cache)
    trimmed = filter_by_examples(space, cfg.fuel)
    kept = revalidate_witnesses(crash, trimmed, cfg.fuel, cache)
    pairwise = pairwise_search(trimmed, cfg.gen, kept, cfg.fuel, cfg.workers, cache)
    from .report import dedupe_witnesses

    witnesses = dedupe_witnesses(collate([*kept, *pairwise]))

    meta = {
        "seed": cfg.gen.seed,
        "config": {
            "n_candidates": cfg.n_candidates,
            "mutate": cfg.mutate,
            "mutant_cap": cfg.mutant_cap,
            "mutant_cap_global": cfg.mutant_cap_global,
            "fuel": cfg.fuel,
            "trials_per_target": cfg.gen.trials_per_target,
            "max_list_len": cfg.gen.max_list_len,
            "max_str_len": cfg.gen.max_str_len,
            "int_range": list(cfg.gen.int_range),
            "special_value_bias": cfg.gen.special_value_bias,
        },
        "counts": {
            "validated": n_fetched,
            "with_mutants": n_with_mutants,
            "after_trim": len(trimmed.candidates),
            "crash_witnesses": len(kept),
            "pairwise_witnesses": len(pairwise),
            "reported": len(witnesses),
        },
        "candidates": [
            {
                "id": c.id,
                "origin": c.origin.kind,
                "parent": c.origin.parent,
                "operator": c.origin.operator,
            }
            for c in trimmed.candidates
        ],
    }
    report = Report(spec=spec, witnesses=tuple(witnesses), diagnostics=tuple(diagnostics), run_meta=meta)
    return report, trimmed
