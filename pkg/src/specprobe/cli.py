"""Command-line entry points: run, bench, serve, fmt, run-worker."""

from __future__ import annotations

import json
import sys
from pathlib import Path

import click

from .acquisition import (
    HttpProvider,
    OfflineProvider,
    ProviderConfig,
    ProviderError,
    SpecFormatError,
    load_fnspec,
)
from .benchmark import DatasetError, load_dataset, matrix_to_csv, matrix_to_json, run_matrix
from .engine import EmptySpace, PipelineConfig, run_pipeline
from .inputgen import GenConfig
from .minifn.parser import ParseError, parse
from .minifn.printer import print_function
from .report import render_partial_examples, report_json_text


@click.group()
def main() -> None:
    """Probe a function spec for ambiguous inputs by differential testing
    of candidate implementations."""


def _load_provider(corpus: str | None, provider_cfg: str | None):
    if (corpus is None) == (provider_cfg is None):
        raise click.UsageError("exactly one of --corpus or --provider is required")
    if corpus is not None:
        return OfflineProvider(corpus)
    try:
        raw = json.loads(Path(provider_cfg).read_text(encoding="utf-8"))
        return HttpProvider(
            ProviderConfig(
                endpoint=raw["endpoint"],
                model=raw.get("model", "default"),
                api_key_env=raw.get("api_key_env", ""),
                temperature=raw.get("temperature", 0.8),
                timeout=raw.get("timeout", 30.0),
            )
        )
    except (OSError, ValueError, KeyError) as exc:
        raise click.UsageError(f"bad provider config: {exc}")


@main.command()
@click.argument("spec_file", type=click.Path(exists=True, dir_okay=False))
@click.option("--corpus", type=click.Path(exists=True, file_okay=False), default=None,
              help="Offline candidate directory (.mfn files).")
@click.option("--provider", "provider_cfg", type=click.Path(exists=True, dir_okay=False),
              default=None, help="JSON config for an HTTP completion provider.")
@click.option("--variant", type=click.Choice(["S", "SP", "SP1", "SPx"]), default=None,
              help="Enforce a variant-ladder tag on the spec.")
@click.option("--no-mutants", is_flag=True, help="Skip the mutation stage.")
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--trials", type=int, default=200, show_default=True,
              help="Fuzzing/pairwise trials per target.")
@click.option("--candidates", "n_candidates", type=int, default=10, show_default=True)
@click.option("--workers", type=int, default=1, show_default=True)
@click.option("--fuel", type=int, default=100_000, show_default=True,
              help="Interpreter step budget per evaluation.")
@click.option("--format", "fmt", type=click.Choice(["text", "json"]), default="text")
@click.option("-o", "--output", type=click.Path(dir_okay=False), default=None,
              help="Write the JSON report to a file.")
def run(spec_file, corpus, provider_cfg, variant, no_mutants, seed, trials,
        n_candidates, workers, fuel, fmt, output) -> None:
    """Run the ambiguity-detection pipeline on a .fnspec file."""
    try:
        spec = load_fnspec(spec_file, variant)
    except SpecFormatError as exc:
        raise click.UsageError(f"bad spec file: {exc}")
    provider = _load_provider(corpus, provider_cfg)
    cfg = PipelineConfig(
        gen=GenConfig(seed=seed, trials_per_target=trials),
        n_candidates=n_candidates,
        mutate=not no_mutants,
        fuel=fuel,
        workers=workers,
    )
    try:
        report = run_pipeline(spec, provider, cfg)
    except EmptySpace as exc:
        click.echo(f"error: {exc}", err=True)
        sys.exit(1)
    except ProviderError as exc:
        click.echo(f"provider error: {exc}", err=True)
        sys.exit(1)
    if output:
        Path(output).write_text(report_json_text(report) + "\n", encoding="utf-8")
    if fmt == "json":
        click.echo(report_json_text(report))
    else:
        click.echo(render_partial_examples(report), nl=False)


@main.command()
@click.argument("dataset_dir", type=click.Path(exists=True, file_okay=False))
@click.option("--k", type=int, default=5, show_default=True, help="Runs per cell (top@k).")
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--trials", type=int, default=200, show_default=True)
@click.option("--no-mutants", is_flag=True)
@click.option("--workers", type=int, default=1, show_default=True)
@click.option("--fuel", type=int, default=5000, show_default=True,
              help="Interpreter step budget per evaluation; benchmark programs are small, so a tight budget flags runaway mutants quickly.")
@click.option("--format", "fmt", type=click.Choice(["csv", "json"]), default="csv")
def bench(dataset_dir, k, seed, trials, no_mutants, workers, fuel, fmt) -> None:
    """Evaluate AIC coverage (top@k) over a benchmark dataset."""
    try:
        cases = load_dataset(dataset_dir)
    except DatasetError as exc:
        raise click.UsageError(str(exc))
    cfg = PipelineConfig(
        gen=GenConfig(seed=seed, trials_per_target=trials),
        mutate=not no_mutants,
        fuel=fuel,
        workers=workers,
    )
    result = run_matrix(cases, k, cfg)
    if fmt == "json":
        click.echo(json.dumps(matrix_to_json(result), indent=2, sort_keys=True))
    else:
        click.echo(matrix_to_csv(result), nl=False)


@main.command()
@click.option("--port", type=int, default=8765, show_default=True)
@click.option("--host", default="127.0.0.1", show_default=True)
@click.option("--state-dir", type=click.Path(file_okay=False), default=None,
              help="Persist session snapshots here and reload on restart.")
@click.option("--ui-dir", type=click.Path(file_okay=False), default=None,
              help="Static single-page app to serve at /ui.")
def serve(port, host, state_dir, ui_dir) -> None:
    """Start the local HTTP service for interactive sessions."""
    import uvicorn

    from .service import create_app

    app = create_app(state_dir=state_dir, ui_dir=ui_dir)
    uvicorn.run(app, host=host, port=port, log_level="warning")


@main.command()
@click.argument("files", nargs=-1, required=True, type=click.Path(exists=True, dir_okay=False))
@click.option("--write", is_flag=True, help="Rewrite files in place instead of printing.")
def fmt(files, write) -> None:
    """Pretty-print .mfn candidate files canonically."""
    for path in files:
        try:
            text = print_function(parse(Path(path).read_text(encoding="utf-8")))
        except ParseError as exc:
            click.echo(f"{path}: {exc}", err=True)
            sys.exit(1)
        if write:
            Path(path).write_text(text, encoding="utf-8")
        else:
            click.echo(text, nl=False)


@main.command("run-worker", hidden=True)
@click.argument("candidate", type=click.Path(exists=True, dir_okay=False))
@click.option("--fuel", type=int, default=100_000, show_default=True)
def run_worker(candidate, fuel) -> None:
    """Answer newline-delimited JSON eval requests for one candidate."""
    from .runner import serve_stdio

    serve_stdio(candidate, fuel)


if __name__ == "__main__":
    main()
