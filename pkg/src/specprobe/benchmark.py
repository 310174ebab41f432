"""Benchmark dataset schema and evaluation harness.

A dataset directory holds one subdirectory per case, each with a
`case.toml` manifest naming the four spec variants (S/SP/SP1/SPx), their
candidate corpora, and the case's ambiguous input classes. Each AIC is
decided by an executable matcher written in MiniFn, and ships with one
known-constructible witness input used to sanity-check the matcher.
"""

from __future__ import annotations

import dataclasses
import logging
import statistics
from dataclasses import dataclass, field
from pathlib import Path
from typing import Dict, List, Sequence, Tuple

try:
    import tomllib  # py311+
except ModuleNotFoundError:  # pragma: no cover
    import tomli as tomllib

from .acquisition import FunctionSpec, OfflineProvider, load_fnspec
from .engine import PipelineConfig, run_pipeline
from .inputgen import GenConfig
from .minifn.interp import DEFAULT_FUEL, eval_call
from .minifn.parser import _Parser, tokenize, parse
from .minifn.syntax import BOOL, BoolV, FunctionDef, Value, ValueOutcome
from .minifn.typecheck import typecheck
from .acquisition import _expr_to_value
from .report import Report

log = logging.getLogger(__name__)

VARIANTS = ("S", "SP", "SP1", "SPx")


class DatasetError(ValueError):
    pass


class MatcherFailure(Exception):
    """A matcher errored or ran out of fuel on a witness input."""


@dataclass(frozen=True)
class AicSpec:
    id: str
    description: str
    matcher: FunctionDef
    witness: Tuple[Value, ...]  # one known input inside the class


@dataclass(frozen=True)
class BenchmarkCase:
    name: str
    path: Path
    variants: Dict[str, FunctionSpec]
    corpora: Dict[str, Path]
    aics: Tuple[AicSpec, ...]


def _parse_args_literal(text: str, spec: FunctionSpec) -> Tuple[Value, ...]:
    text = text.strip()
    if not text:
        return ()
    p = _Parser(tokenize(text))
    args: List[Value] = []
    i = 0
    while True:
        e = p.expression()
        expected = spec.params[i][1] if i < len(spec.params) else None
        args.append(_expr_to_value(e, expected))
        i += 1
        if p.at("punct", ","):
            p.next()
            continue
        break
    p.expect("eof")
    return tuple(args)


def matcher_accepts(aic: AicSpec, args: Sequence[Value], fuel: int = DEFAULT_FUEL) -> bool:
    out = eval_call(aic.matcher, list(args), fuel)
    if not isinstance(out, ValueOutcome) or not isinstance(out.value, BoolV):
        raise MatcherFailure(f"matcher {aic.id} failed on ({', '.join(map(str, args))})")
    return out.value.b


def load_case(case_dir: str | Path) -> BenchmarkCase:
    case_dir = Path(case_dir)
    manifest_path = case_dir / "case.toml"
    if not manifest_path.is_file():
        raise DatasetError(f"missing manifest: {manifest_path}")
    manifest = tomllib.loads(manifest_path.read_text(encoding="utf-8"))
    name = manifest.get("name") or case_dir.name

    variants: Dict[str, FunctionSpec] = {}
    corpora: Dict[str, Path] = {}
    vtable = manifest.get("variants", {})
    for tag in VARIANTS:
        if tag not in vtable:
            raise DatasetError(f"{name}: variant {tag} missing from manifest")
        entry = vtable[tag]
        variants[tag] = load_fnspec(case_dir / entry["spec"], tag)
        corpus = case_dir / entry["corpus"]
        if not corpus.is_dir():
            raise DatasetError(f"{name}: corpus directory missing: {corpus}")
        corpora[tag] = corpus

    base = variants["S"]
    aics: List[AicSpec] = []
    for raw in manifest.get("aic", []):
        matcher = parse((case_dir / raw["matcher"]).read_text(encoding="utf-8"))
        typecheck(matcher)
        if matcher.return_type != BOOL:
            raise DatasetError(f"{name}/{raw['id']}: matcher must return Bool")
        if tuple(t for _, t in matcher.params) != base.param_types:
            raise DatasetError(f"{name}/{raw['id']}: matcher signature must mirror the target's")
        aic = AicSpec(raw["id"], raw.get("description", ""), matcher,
                      _parse_args_literal(raw["witness"], base))
        if not matcher_accepts(aic, aic.witness):
            raise DatasetError(f"{name}/{raw['id']}: bundled witness is rejected by its own matcher")
        aics.append(aic)
    if not 1 <= len(aics) <= 3:
        raise DatasetError(f"{name}: a case carries between 1 and 3 AICs")
    return BenchmarkCase(name, case_dir, variants, corpora, tuple(aics))


def load_dataset(dataset_dir: str | Path) -> List[BenchmarkCase]:
    dataset_dir = Path(dataset_dir)
    cases = []
    for child in sorted(dataset_dir.iterdir()):
        if child.is_dir() and (child / "case.toml").is_file():
            cases.append(load_case(child))
    if not cases:
        raise DatasetError(f"no cases found under {dataset_dir}")
    return cases


# ---------------------------------------------------------------------------
# Metrics


def aic_coverage(report: Report, aics: Sequence[AicSpec], fuel: int = DEFAULT_FUEL) -> float:
    """Fraction of AICs with at least one witness inside the class."""
    if not aics:
        return 1.0
    caught = 0
    for aic in aics:
        for w in report.witnesses:
            try:
                hit = matcher_accepts(aic, w.args, fuel)
            except MatcherFailure as mf:
                log.warning("%s", mf)
                continue
            if hit:
                caught += 1
                break
    return caught / len(aics)


def topk(runs: Sequence[Report], aics: Sequence[AicSpec], fuel: int = DEFAULT_FUEL) -> float:
    """Best coverage across independent randomized runs."""
    if not runs:
        raise ValueError("runs must be nonempty")
    return max(aic_coverage(r, aics, fuel) for r in runs)


# ---------------------------------------------------------------------------
# Matrix harness


@dataclass
class MatrixResult:
    coverage: Dict[str, Dict[str, float]]  # case -> variant -> top@k
    failures: Dict[str, Dict[str, str]]  # case -> variant -> error text
    variant_means: Dict[str, float]
    k: int
    seed: int


def run_case_variant(case: BenchmarkCase, tag: str, k: int, cfg: PipelineConfig) -> float:
    provider = OfflineProvider(case.corpora[tag])
    spec = case.variants[tag]
    reports = []
    for i in range(1, k + 1):
        gen = dataclasses.replace(cfg.gen, seed=cfg.gen.seed + i)
        reports.append(run_pipeline(spec, provider, dataclasses.replace(cfg, gen=gen)))
    return topk(reports, case.aics, cfg.fuel)


def run_matrix(
    cases: Sequence[BenchmarkCase], k: int = 5, cfg: PipelineConfig = PipelineConfig()
) -> MatrixResult:
    """top@k AIC coverage for every (case, variant) cell, plus per-variant
    means. Per-cell failures are recorded and the matrix still produced."""
    coverage: Dict[str, Dict[str, float]] = {}
    failures: Dict[str, Dict[str, str]] = {}
    for case in cases:
        row: Dict[str, float] = {}
        for tag in VARIANTS:
            try:
                row[tag] = run_case_variant(case, tag, k, cfg)
            except Exception as exc:  # per-cell isolation
                failures.setdefault(case.name, {})[tag] = f"{type(exc).__name__}: {exc}"
                row[tag] = 0.0
        coverage[case.name] = row
    means = {
        tag: statistics.fmean(coverage[c][tag] for c in coverage) for tag in VARIANTS
    }
    return MatrixResult(coverage, failures, means, k, cfg.gen.seed)


def matrix_to_json(res: MatrixResult) -> dict:
    return {
        "k": res.k,
        "seed": res.seed,
        "coverage": res.coverage,
        "variant_means": res.variant_means,
        "failures": res.failures,
    }


def matrix_to_csv(res: MatrixResult) -> str:
    lines = ["case," + ",".join(VARIANTS)]
    for case, row in res.coverage.items():
        lines.append(case + "," + ",".join(f"{row[t]:.3f}" for t in VARIANTS))
    lines.append("MEAN," + ",".join(f"{res.variant_means[t]:.3f}" for t in VARIANTS))
    return "\n".join(lines) + "\n"
