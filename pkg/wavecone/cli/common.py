"""Shared CLI plumbing: consoles, logging setup and the exit-code contract.

Exit codes: 0 success, 2 unparseable input, 3 mathematical precondition,
4 experiment hypothesis gate.
"""

from __future__ import annotations

import json
import logging
from collections.abc import Iterator
from contextlib import contextmanager
from pathlib import Path

import typer
import yaml
from pydantic import ValidationError
from rich.console import Console
from rich.logging import RichHandler

from wavecone.config import AnalysisSettings
from wavecone.errors import HypothesisError, SpecError, WaveconeError
from wavecone.operators.spec import describe_validation_error

console = Console()
console_err = Console(stderr=True)

PARSE_ERROR_EXIT = SpecError.exit_code
FORMATS = ("json", "csv")


def configure_logging(verbose: bool) -> None:
    """Attach a single RichHandler on stderr to the package logger."""
    logger = logging.getLogger("wavecone")
    for handler in list(logger.handlers):
        if isinstance(handler, RichHandler):
            logger.removeHandler(handler)
    logger.addHandler(RichHandler(console=console_err, show_path=False, show_time=False))
    logger.setLevel(logging.DEBUG if verbose else logging.WARNING)


def _yaml_location(error: yaml.YAMLError) -> str:
    mark = getattr(error, "problem_mark", None)
    if mark is None:
        return ""
    return f" (line {mark.line + 1}, column {mark.column + 1})"


@contextmanager
def exit_on_error() -> Iterator[None]:
    """Translate wavecone and parsing errors into the CLI exit codes."""
    try:
        yield
    except HypothesisError as e:
        console_err.print(f"[red]Hypothesis gate failed:[/red] {e.hypothesis}")
        console_err.print(f"  {e}")
        raise typer.Exit(code=e.exit_code) from e
    except WaveconeError as e:
        console_err.print(f"[red]Error:[/red] {e}")
        raise typer.Exit(code=e.exit_code) from e
    except ValidationError as e:
        console_err.print(f"[red]Invalid input:[/red] {describe_validation_error(e)}")
        raise typer.Exit(code=PARSE_ERROR_EXIT) from e
    except json.JSONDecodeError as e:
        console_err.print(
            f"[red]JSON Parse Error:[/red] line {e.lineno}, column {e.colno}: {e.msg}"
        )
        raise typer.Exit(code=PARSE_ERROR_EXIT) from e
    except yaml.YAMLError as e:
        console_err.print(f"[red]YAML Parse Error{_yaml_location(e)}:[/red] {e}")
        raise typer.Exit(code=PARSE_ERROR_EXIT) from e
    except (FileNotFoundError, ValueError) as e:
        console_err.print(f"[red]Error:[/red] {e}")
        raise typer.Exit(code=PARSE_ERROR_EXIT) from e


def load_settings(
    path: Path | None, seed: int | None = None, sample_size: int | None = None
) -> AnalysisSettings:
    """Settings from --settings (or defaults) with flag overrides applied."""
    settings = AnalysisSettings.load(path) if path else AnalysisSettings.default()
    update = {}
    if seed is not None:
        update["seed"] = seed
    if sample_size is not None:
        update["sample_size"] = sample_size
    if not update:
        return settings
    return AnalysisSettings.model_validate({**settings.model_dump(), **update})


def check_formats(formats: list[str] | None) -> tuple[str, ...]:
    """Validate --format values; both formats when none are given."""
    if not formats:
        return FORMATS
    unknown = [f for f in formats if f not in FORMATS]
    if unknown:
        console_err.print(f"[red]Error:[/red] unknown format(s) {unknown}; expected json or csv")
        raise typer.Exit(code=PARSE_ERROR_EXIT)
    return tuple(dict.fromkeys(formats))
