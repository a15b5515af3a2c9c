"""Annihilate command: adjugate annihilator of an elliptic operator."""

import json
from pathlib import Path

import typer

from wavecone.api import annihilate as build_annihilator
from wavecone.cli.common import console, exit_on_error, load_settings
from wavecone.operators.resolver import load_operator
from wavecone.operators.spec import save_spec_file, spec_hash, to_json

SPEC_NAME = "annihilator.json"
CHECK_NAME = "exactness.json"


def annihilate(
    op: str = typer.Option(
        ..., "--op", help="Elliptic operator: spec JSON path or builtin reference"
    ),
    settings_path: Path | None = typer.Option(
        None, "--settings", help="AnalysisSettings YAML file"
    ),
    seed: int | None = typer.Option(None, "--seed", help="Seed of the sampled checks"),
    out: Path | None = typer.Option(
        None,
        "--out",
        "-o",
        help="Directory for annihilator.json and exactness.json (spec on stdout when omitted)",
    ),
) -> None:
    """
    Build A with A o B = 0 and ker A(xi) = im B(xi) for an elliptic B.

    Example:
        wavecone annihilate --op "builtin:gradient?d=2&m=1" --out out/
    """
    with exit_on_error():
        settings = load_settings(settings_path, seed=seed)
        op_b = load_operator(op)
        op_a, check = build_annihilator(op, settings)

    exactness = {
        "source": op_b.label(),
        "source_hash": spec_hash(op_b),
        "annihilator_hash": spec_hash(op_a),
        "order": op_a.k,
        "seed": settings.seed,
        **check._asdict(),
    }
    if out is None:
        typer.echo(to_json(op_a), nl=False)
        return

    spec_path = out / SPEC_NAME
    save_spec_file(op_a, spec_path)
    check_path = out / CHECK_NAME
    check_path.write_text(json.dumps(exactness, indent=2, sort_keys=True) + "\n")
    console.print(f"[green]✓[/green] Annihilator of order {op_a.k} written to {spec_path}")
    console.print(f"symbolic_zero: {str(check.symbolic_zero).lower()}")
    console.print(f"max principal angle: {check.max_angle:.3g}")
