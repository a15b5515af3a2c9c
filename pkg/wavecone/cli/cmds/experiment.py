"""Experiment command: run a YAML/JSON experiment config and write its reports."""

from pathlib import Path

import typer

from wavecone.api import run_experiment
from wavecone.cli.common import check_formats, console, exit_on_error


def _overrides(
    seed: int | None, grid: int | None, p: str | None, scales: str | None
) -> dict:
    overrides: dict = {}
    if seed is not None:
        overrides["seed"] = seed
    if grid is not None:
        overrides["grid"] = grid
    if p is not None:
        overrides["p"] = p
    if scales is not None:
        overrides["scales"] = [s.strip() for s in scales.split(",") if s.strip()]
    return overrides


def experiment(
    config: Path = typer.Argument(..., help="Experiment config (YAML or JSON)"),
    out: Path = typer.Option(Path("out"), "--out", "-o", help="Output directory"),
    formats: list[str] | None = typer.Option(
        None, "--format", help="Report format: json or csv (repeatable; both by default)"
    ),
    seed: int | None = typer.Option(None, "--seed", help="Override the config seed"),
    grid: int | None = typer.Option(None, "--grid", help="Override the config grid size"),
    p: str | None = typer.Option(None, "--p", help="Override the exponent p"),
    scales: str | None = typer.Option(None, "--scales", help="Override scales, e.g. 1/8,1/16"),
) -> None:
    """
    Run an experiment and write CSV/JSON reports.

    A failed hypothesis gate exits with code 4 and names the hypothesis.

    Example:
        wavecone experiment configs/swirl.yaml --out out/ --format csv
    """
    chosen = check_formats(formats)
    with exit_on_error():
        written = run_experiment(config, out, chosen, _overrides(seed, grid, p, scales))
    for path in written:
        console.print(f"[green]✓[/green] {path}")
