"""Partial-example rendering, witness dedupe, JSON round-trips."""

import json
import math

from specprobe.acquisition import parse_fnspec, validate_and_dedupe
from specprobe.engine import SuggestionSpace, make_witness, run_pipeline
from specprobe.minifn.syntax import FLOAT, FloatV, ListV, canon_args
from specprobe.report import (
    MAX_CLASSES_SHOWN,
    PLACEHOLDER,
    Report,
    dedupe_witnesses,
    render_partial_examples,
    report_from_json,
    report_json_text,
    report_to_json,
    spec_from_json,
    spec_to_json,
    witness_from_json,
    witness_to_json,
)

SPEC = parse_fnspec(
    '''
fn first_nonzero(nums: List(Float)) -> Float
"""
Return the first non-zero value in nums.
"""
'''
)

RAISING = """
fn first_nonzero(nums: List(Float)) -> Float {
    for num in nums {
        if num != 0.0 {
            return num;
        }
    }
    raise("no non-zero value");
}
"""

ZERO_DEFAULT = """
fn first_nonzero(nums: List(Float)) -> Float {
    for num in nums {
        if num != 0.0 {
            return num;
        }
    }
    return 0.0;
}
"""


def space_of(*sources, spec=SPEC):
    cands, diags = validate_and_dedupe(list(sources), spec, origin_kind="corpus")
    assert not diags
    return SuggestionSpace(tuple(cands), spec)


def witness_on(space, args):
    return make_witness(space, args, "pairwise", 5000)


def sample_report():
    space = space_of(RAISING, ZERO_DEFAULT)
    w = witness_on(space, (ListV((), FLOAT),))
    return Report(spec=SPEC, witnesses=(w,), diagnostics=("source #3: parse error",))


# ---------------------------------------------------------------------------
# Rendering


def test_render_contains_placeholder_call_and_behaviors():
    text = render_partial_examples(sample_report())
    assert ">>> first_nonzero([])" in text
    assert PLACEHOLDER in text
    assert "2 candidate behaviors observed" in text
    assert "error(UserRaised) (1)" in text
    assert "0.0 (1)" in text


def test_render_never_invents_an_expected_output():
    text = render_partial_examples(sample_report())
    line = next(l for l in text.splitlines() if l.startswith(PLACEHOLDER))
    assert line.split("#")[0].strip() == PLACEHOLDER


def test_render_empty_report():
    text = render_partial_examples(Report(spec=SPEC, witnesses=()))
    assert "no ambiguity witnesses found" in text
    assert PLACEHOLDER not in text


def test_render_truncates_many_behavior_classes():
    sources = [
        "fn first_nonzero(nums: List(Float)) -> Float { return %s; }" % lit
        for lit in ("1.0", "2.0", "3.0", "4.0", "5.0", "6.0")
    ]
    space = space_of(*sources)
    w = witness_on(space, (ListV((), FLOAT),))
    text = render_partial_examples(Report(spec=SPEC, witnesses=(w,)))
    assert "+2 more" in text
    shown = text.count("(1)")
    assert shown == MAX_CLASSES_SHOWN


def test_render_witnesses_appear_simplest_first(tmp_path):
    # end to end: a real pipeline report lists [] before [nan]
    from specprobe.acquisition import OfflineProvider
    from specprobe.engine import PipelineConfig
    from specprobe.inputgen import GenConfig

    skip_nan = """
fn first_nonzero(nums: List(Float)) -> Float {
    for num in nums {
        if num != 0.0 and not is_nan(num) {
            return num;
        }
    }
    return 0.0;
}
"""
    for name, src in [("01.mfn", RAISING), ("02.mfn", ZERO_DEFAULT), ("03.mfn", skip_nan)]:
        (tmp_path / name).write_text(src, encoding="utf-8")
    cfg = PipelineConfig(gen=GenConfig(seed=0, trials_per_target=40, max_list_len=4),
                         fuel=5000, mutant_cap=8, mutant_cap_global=24)
    report = run_pipeline(SPEC, OfflineProvider(tmp_path), cfg)
    text = render_partial_examples(report)
    assert text.index("first_nonzero([])") < text.index("first_nonzero([nan])")
    scores = [w.score for w in report.witnesses]
    assert scores == sorted(scores)
    keys = [canon_args(w.args) for w in report.witnesses]
    assert len(keys) == len(set(keys)), "witness args must be pairwise distinct"


# ---------------------------------------------------------------------------
# Dedupe


def test_dedupe_collapses_same_partition_keeping_smallest():
    space = space_of(RAISING, ZERO_DEFAULT)
    small = witness_on(space, (ListV((), FLOAT),))
    big = witness_on(space, (ListV((FloatV(0.0), FloatV(0.0)), FLOAT),))
    out = dedupe_witnesses([big, small])
    assert [canon_args(w.args) for w in out] == ["[]"]


def test_dedupe_keeps_distinct_partitions():
    space = space_of(RAISING, ZERO_DEFAULT)
    crash_both = witness_on(space, (ListV((), FLOAT),))
    value_split = witness_on(space, (ListV((FloatV(1.0),), FLOAT),))
    out = dedupe_witnesses([crash_both, value_split])
    assert len(out) == 2


# ---------------------------------------------------------------------------
# JSON


def test_spec_json_round_trip():
    spec = parse_fnspec(
        'fn f(a: Int, bs: List(Float)) -> Float\n"""\ntwo\nlines\n"""\n'
        ">>> f(1, [2.0])\n2.0\n>>> f(0, [])\n!error\n",
        variant_tag="SPx",
    )
    assert spec_from_json(spec_to_json(spec)) == spec


def test_witness_json_round_trip_with_nan_payloads():
    space = space_of(RAISING, ZERO_DEFAULT)
    w = witness_on(space, (ListV((FloatV(math.nan), FloatV(math.inf)), FLOAT),))
    back = witness_from_json(witness_to_json(w))
    assert canon_args(back.args) == canon_args(w.args)
    assert back.score == w.score
    assert back.outcome_classes() == w.outcome_classes()


def test_report_json_round_trip():
    report = sample_report()
    back = report_from_json(report_to_json(report))
    assert back.spec == report.spec
    assert back.diagnostics == report.diagnostics
    assert [canon_args(w.args) for w in back.witnesses] == [
        canon_args(w.args) for w in report.witnesses
    ]


def test_report_json_text_is_canonical_and_finite():
    report = sample_report()
    a = report_json_text(report)
    b = report_json_text(report_from_json(json.loads(a)))
    assert a == b
    json.loads(a)  # strictly valid JSON, no NaN tokens
    assert "NaN" not in a.replace('"NaN"', "")
