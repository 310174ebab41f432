"""Rendering witnesses as partial examples, plus the JSON report schema.

A partial example shows the invocation with a `???` placeholder: the
expected output is always for the human to supply, never invented here.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import TYPE_CHECKING, Any, Dict, List, Sequence, Tuple

from .acquisition import ANY_ERROR, AnyError, FunctionSpec, FunctionalExample
from .minifn.jsoncodec import outcome_from_json, outcome_to_json, type_from_json, type_to_json, value_from_json, value_to_json
from .minifn.syntax import canon_args, outcome_class, outcome_summary

if TYPE_CHECKING:  # pragma: no cover
    from .engine import Witness

PLACEHOLDER = "???"
MAX_CLASSES_SHOWN = 4


@dataclass(frozen=True)
class Report:
    spec: FunctionSpec
    witnesses: Tuple["Witness", ...]
    diagnostics: Tuple[str, ...] = ()
    run_meta: Dict[str, Any] = field(default_factory=dict)


def _class_summaries(w: "Witness") -> List[str]:
    # one representative summary per behaviour class, candidate-count tagged
    classes = w.outcome_classes()
    out = []
    for key in sorted(classes):
        cid = classes[key][0]
        out.append(f"{outcome_summary(w.partition[cid])} ({len(classes[key])})")
    return out


def render_partial_examples(report: Report) -> str:
    """The human-facing text report: one partial example per witness."""
    spec = report.spec
    lines = [f"# {spec.signature()}"]
    if spec.purpose:
        lines.append(f"# purpose: {spec.purpose.splitlines()[0]}")
    if not report.witnesses:
        lines.append("# no ambiguity witnesses found")
        return "\n".join(lines) + "\n"
    lines.append(f"# {len(report.witnesses)} input(s) need a decision:")
    for w in report.witnesses:
        lines.append("")
        lines.append(f">>> {spec.name}({canon_args(w.args)})")
        sums = _class_summaries(w)
        shown = sums[:MAX_CLASSES_SHOWN]
        extra = len(sums) - len(shown)
        tail = f", +{extra} more" if extra > 0 else ""
        lines.append(
            f"{PLACEHOLDER}  # {len(sums)} candidate behaviors observed: "
            + ", ".join(shown) + tail
        )
    return "\n".join(lines) + "\n"


def dedupe_witnesses(witnesses: Sequence["Witness"]) -> List["Witness"]:
    """Collapse witnesses inducing the same partition of the space, keeping
    the smallest by SizeScore within each duplicate class."""
    best: Dict[frozenset, "Witness"] = {}
    order: List[frozenset] = []
    for w in witnesses:
        key = frozenset(frozenset(ids) for ids in w.outcome_classes().values())
        if key not in best:
            best[key] = w
            order.append(key)
        elif w.score < best[key].score:
            best[key] = w
    return sorted((best[k] for k in order), key=lambda w: w.score)


# ---------------------------------------------------------------------------
# JSON schema


def spec_to_json(spec: FunctionSpec) -> Dict[str, Any]:
    return {
        "name": spec.name,
        "params": [{"name": n, "type": type_to_json(t)} for n, t in spec.params],
        "return_type": type_to_json(spec.return_type),
        "purpose": spec.purpose,
        "examples": [
            {
                "args": [value_to_json(a) for a in ex.args],
                "expected": "!error" if isinstance(ex.expected, AnyError) else value_to_json(ex.expected),
            }
            for ex in spec.examples
        ],
        "variant_tag": spec.variant_tag,
    }


def spec_from_json(data: Dict[str, Any]) -> FunctionSpec:
    examples = []
    for ex in data.get("examples", []):
        expected = ex["expected"]
        examples.append(
            FunctionalExample(
                tuple(value_from_json(a) for a in ex["args"]),
                ANY_ERROR if expected == "!error" else value_from_json(expected),
            )
        )
    return FunctionSpec(
        name=data["name"],
        params=tuple((p["name"], type_from_json(p["type"])) for p in data["params"]),
        return_type=type_from_json(data["return_type"]),
        purpose=data.get("purpose"),
        examples=tuple(examples),
        variant_tag=data.get("variant_tag"),
    )


def witness_to_json(w: "Witness") -> Dict[str, Any]:
    return {
        "args": [value_to_json(a) for a in w.args],
        "args_text": canon_args(w.args),
        "partition": {cid: outcome_to_json(w.partition[cid]) for cid in sorted(w.partition)},
        "classes": {k: ids for k, ids in w.outcome_classes().items()},
        "provenance": w.provenance,
        "score": {"total": w.score.total, "tiebreak": w.score.tiebreak},
    }


def witness_from_json(data: Dict[str, Any]) -> "Witness":
    from .engine import Witness
    from .inputgen import SizeScore

    return Witness(
        args=tuple(value_from_json(a) for a in data["args"]),
        partition={cid: outcome_from_json(o) for cid, o in data["partition"].items()},
        score=SizeScore(data["score"]["total"], data["score"]["tiebreak"]),
        provenance=data["provenance"],
    )


def report_to_json(report: Report) -> Dict[str, Any]:
    return {
        "spec": spec_to_json(report.spec),
        "witnesses": [witness_to_json(w) for w in report.witnesses],
        "diagnostics": list(report.diagnostics),
        "meta": report.run_meta,
    }


def report_from_json(data: Dict[str, Any]) -> Report:
    return Report(
        spec=spec_from_json(data["spec"]),
        witnesses=tuple(witness_from_json(w) for w in data["witnesses"]),
        diagnostics=tuple(data.get("diagnostics", [])),
        run_meta=data.get("meta", {}),
    )


def report_json_text(report: Report) -> str:
    """Canonical JSON serialization: byte-identical for identical runs."""
    return json.dumps(report_to_json(report), sort_keys=True, separators=(",", ":"), allow_nan=False)
