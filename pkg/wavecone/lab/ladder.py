"""The Sobolev exponent ladder q(l) and the admissible exponent windows.

    q(l) = d q / (d - l q)   if l q < d
    q(l) = q(l - 1)          if l q >= d

All arithmetic is exact (Fraction).
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import NamedTuple

from wavecone.errors import ExponentRangeError, ParameterRangeError


class SeedFlag(str, Enum):
    """How a ladder seed relates to the exponent window."""

    INTERIOR = "interior"
    LIMITING = "limiting"
    BOUNDARY = "boundary"


class RunMode(str, Enum):
    """Label attached to every higher-integrability report."""

    THEOREM = "theorem"
    A_FREE_EXTENDED = "a_free_extended"
    LIMITING = "limiting"
    EXPLORATORY = "exploratory"


@dataclass(frozen=True)
class LadderQuery:
    q: Fraction
    d: int
    ell: int

    def __post_init__(self) -> None:
        object.__setattr__(self, "q", Fraction(self.q))
        if self.q < 1:
            raise ParameterRangeError(f"ladder exponent q must be >= 1, got {self.q}")
        if self.d < 1:
            raise ParameterRangeError(f"d must be >= 1, got {self.d}")
        if self.ell < 0:
            raise ParameterRangeError(f"ladder step must be >= 0, got {self.ell}")


def q_ladder(query: LadderQuery) -> Fraction:
    """q(l) with the recursion capped at the last step m with m q < d."""
    q, d = query.q, query.d
    steps = query.ell
    while steps > 0 and steps * q >= d:
        steps -= 1
    return d * q / (d - steps * q)


class ExponentWindow(NamedTuple):
    """[lower, upper) with upper = None for [1, inf); ``upper`` itself is the limiting case."""

    lower: Fraction
    upper: Fraction | None

    def contains(self, p: Fraction) -> bool:
        return p >= self.lower and (self.upper is None or p < self.upper)

    def describe(self) -> str:
        upper = "inf" if self.upper is None else str(self.upper)
        return f"[{self.lower}, {upper})"


def exponent_window(d: int, k: int) -> ExponentWindow:
    """[1, d/(d-k)) for k < d, [1, inf) for k >= d."""
    if d < 1 or k < 1:
        raise ParameterRangeError("d and k must be positive")
    if k < d:
        return ExponentWindow(Fraction(1), Fraction(d, d - k))
    return ExponentWindow(Fraction(1), None)


class LadderSeed(NamedTuple):
    q: Fraction
    flag: SeedFlag
    p: Fraction
    d: int
    k: int


def ladder_seed(p: Fraction | int | str, d: int, k: int) -> LadderSeed:
    """Find q with q(k-1) = p by inverting the ladder: q = p d / (d + (k-1) p).

    A computed q <= 1 (including p = 1) is the plain total-variation case and
    is returned as q = 1 with the ``boundary`` flag. p = d/(d-k) is accepted as
    the ``limiting`` endpoint; whether the operator is canceling and of
    constant rank there is for the caller to check.

    Raises:
        ExponentRangeError: If p is outside the higher-integrability window
    """
    p = Fraction(p)
    window = exponent_window(d, k)
    limiting = window.upper is not None and p == window.upper
    if not (window.contains(p) or limiting):
        raise ExponentRangeError(
            f"p = {p} is outside the higher-integrability window {window.describe()} "
            f"for d={d}, k={k}"
        )
    ell = k - 1
    q = p * d / (d + ell * p)
    if q <= 1:
        return LadderSeed(q=Fraction(1), flag=SeedFlag.BOUNDARY, p=p, d=d, k=k)
    if q_ladder(LadderQuery(q=q, d=d, ell=ell)) != p:
        raise ArithmeticError(f"ladder inversion failed for p={p}, d={d}, k={k}")
    flag = SeedFlag.LIMITING if limiting else SeedFlag.INTERIOR
    return LadderSeed(q=q, flag=flag, p=p, d=d, k=k)


def run_mode(p: Fraction, d: int, k: int, a_free: bool, canceling: bool = False) -> RunMode:
    """Classify an experiment exponent against the window of the operator order.

    The endpoint d/(d-k) is ``limiting`` only for canceling constant-rank
    operators; A-free runs outside the window are ``a_free_extended``.
    """
    window = exponent_window(d, k)
    if window.contains(p):
        return RunMode.THEOREM
    if canceling and window.upper is not None and p == window.upper:
        return RunMode.LIMITING
    if a_free:
        return RunMode.A_FREE_EXTENDED
    return RunMode.EXPLORATORY
