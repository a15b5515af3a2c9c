"""Analyze command: rank profile, canceling data and wave cone of an operator."""

from pathlib import Path

import typer
from rich.table import Table

from wavecone.api import analyze as analyze_operator
from wavecone.cli.common import console, exit_on_error, load_settings
from wavecone.lab.configs import load_cone_config, load_subspace_config

REPORT_NAME = "analysis.json"


def analyze(
    op: str = typer.Option(
        ..., "--op", help="Operator spec JSON path or builtin:NAME?d=..&m=..&k=.."
    ),
    subspace: list[Path] | None = typer.Option(
        None, "--subspace", help="YAML/JSON file with a subspace basis (repeatable)"
    ),
    cone: Path | None = typer.Option(
        None, "--cone", help="YAML/JSON cone file for the rigidity certificate"
    ),
    settings_path: Path | None = typer.Option(
        None, "--settings", help="AnalysisSettings YAML file"
    ),
    sample_size: int | None = typer.Option(None, "--sample-size", help="Sphere sample size"),
    seed: int | None = typer.Option(None, "--seed", help="Sampling seed"),
    out: Path | None = typer.Option(
        None, "--out", "-o", help="Directory for analysis.json (stdout when omitted)"
    ),
) -> None:
    """
    Analyze a constant-coefficient operator on a sampled frequency sphere.

    Example:
        wavecone analyze --op "builtin:divergence_rows?d=2" --subspace L.yaml
    """
    with exit_on_error():
        settings = load_settings(settings_path, seed=seed, sample_size=sample_size)
        subspaces = [load_subspace_config(p).build() for p in subspace or []]
        cone_spec = load_cone_config(cone).build() if cone else None
        report = analyze_operator(op, subspaces, cone_spec, settings)

    if out is None:
        typer.echo(report.to_json())
        return

    path = out / REPORT_NAME
    report.write(path)
    table = Table(title=report.operator)
    table.add_column("Property", style="cyan")
    table.add_column("Value")
    table.add_row("rank", f"{report.rank_profile.min_rank}..{report.rank_profile.max_rank}")
    table.add_row("constant rank", str(report.is_constant_rank).lower())
    table.add_row("canceling", str(report.is_canceling).lower())
    table.add_row("canceling dim", str(report.canceling_dim))
    table.add_row("cocanceling dim", str(report.cocanceling_dim))
    for entry in report.delta_L:
        delta = "none" if entry.delta is None else f"{entry.delta:.6g}"
        table.add_row(f"delta_L ({entry.label})", delta)
    if report.cocanceling is not None:
        table.add_row("rigidity certificate", str(report.cocanceling.certificate).lower())
    console.print(table)
    console.print(f"[green]✓[/green] Report written to {path}")
