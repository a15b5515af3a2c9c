"""Ladder command: exponent ladder values and higher-integrability seeds."""

from fractions import Fraction

import typer

from wavecone.cli.common import PARSE_ERROR_EXIT, console, console_err, exit_on_error
from wavecone.lab.ladder import LadderQuery, exponent_window, ladder_seed, q_ladder
from wavecone.operators.spec import parse_rational


def ladder(
    d: int = typer.Option(..., "--d", help="Space dimension"),
    q: str | None = typer.Option(None, "--q", help="Starting exponent (rational)"),
    ell: int | None = typer.Option(None, "--l", help="Number of ladder steps"),
    p: str | None = typer.Option(None, "--p", help="Target exponent (rational)"),
    k: int | None = typer.Option(None, "--k", help="Operator order"),
) -> None:
    """
    Evaluate q(l) with --q/--l, or find the seed q with q(k-1) = p with --p/--k.

    Examples:
        wavecone ladder --q 3/2 --d 3 --l 1
        wavecone ladder --p 3 --d 3 --k 2
    """
    forward = q is not None and ell is not None
    inverse = p is not None and k is not None
    if forward == inverse:
        console_err.print("[red]Error:[/red] pass either --q and --l, or --p and --k")
        raise typer.Exit(code=PARSE_ERROR_EXIT)

    with exit_on_error():
        if forward:
            value = q_ladder(LadderQuery(q=parse_rational(q), d=d, ell=ell))
            console.print(f"q({ell}) = {value}")
            return
        seed = ladder_seed(parse_rational(p), d, k)

    window = exponent_window(d, k)
    console.print(f"q = {seed.q}")
    console.print(f"flag = {seed.flag.value}")
    console.print(f"window = {window.describe()}")
    if seed.q != Fraction(1):
        console.print(f"check: q({k - 1}) = {q_ladder(LadderQuery(seed.q, d, k - 1))}")
