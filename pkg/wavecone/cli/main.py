"""Main CLI application for wavecone."""

import typer

from wavecone.cli.common import configure_logging, console

app = typer.Typer(
    name="wavecone",
    help="wavecone: operator analysis, annihilators, spectral solves and estimate experiments.",
    add_completion=False,
)


@app.callback()
def main(
    verbose: bool = typer.Option(False, "--verbose", "-v", help="Log debug output to stderr"),
) -> None:
    configure_logging(verbose)


@app.command()
def version() -> None:
    """Show wavecone version."""
    from wavecone import __version__

    console.print(f"wavecone version {__version__}", style="bold green")


# Import commands
from wavecone.cli.cmds import (  # noqa: E402
    analyze,
    annihilate,
    experiment,
    ladder,
    solve,
)

app.command(name="analyze")(analyze.analyze)
app.command(name="annihilate")(annihilate.annihilate)
app.command(name="ladder")(ladder.ladder)
app.command(name="solve")(solve.solve)
app.command(name="experiment")(experiment.experiment)


if __name__ == "__main__":
    app()
