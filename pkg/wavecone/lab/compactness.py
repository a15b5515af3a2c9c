"""Weak* and equiintegrability diagnostics for sequences of fields on Omega'."""

from __future__ import annotations

import logging
from collections.abc import Sequence
from typing import NamedTuple

import numpy as np

from wavecone.cones.geometry import ConeSpec
from wavecone.lab.laminates import TEST_DEGREE, monomial_pairings
from wavecone.lab.measures import SubBox
from wavecone.lab.polar import polar_diagnostics
from wavecone.spectral.grid import TorusField

logger = logging.getLogger(__name__)

EQUIINTEGRABLE_RATIO = 1e-2


class CompactnessDiagnostics(NamedTuple):
    """weakstar: (members, monomials, dim); tails: (members, thresholds)."""

    weakstar: np.ndarray
    weakstar_steps: list[float]
    tails: np.ndarray
    masses: list[float]
    thresholds: list[float]
    equiintegrable: bool
    cone_violations: list[int] | None


def _tail(magnitude: np.ndarray, threshold: float, q: float, cell: float) -> float:
    above = magnitude[magnitude > threshold]
    return float(np.sum(above**q) * cell)


def compactness_diagnostics(
    fields: Sequence[TorusField],
    box: SubBox,
    thresholds: Sequence[float],
    q: float = 1.0,
    cone: ConeSpec | None = None,
    degree: int = TEST_DEGREE,
) -> CompactnessDiagnostics:
    """Pairings with x^alpha on Omega' and the tails int_{|f| > M} |f|^q.

    The sequence is flagged q-equiintegrable when, at the largest threshold,
    every member's tail is at most 1e-2 of the largest q-mass. ``weakstar_steps``
    holds the sup-norm change of the pairing table between consecutive members.
    With a cone, each member's polars are tested for membership.

    Raises:
        ValueError: If the sequence or the thresholds are empty
    """
    if not fields:
        raise ValueError("compactness diagnostics need a nonempty sequence")
    if not thresholds:
        raise ValueError("at least one threshold is required")
    levels = sorted(float(m) for m in thresholds)
    grid = fields[0].grid
    mask = box.mask(grid)
    cell = grid.cell_volume
    pairings, tails, masses, violations = [], [], [], []
    for f in fields:
        if f.grid != grid:
            raise ValueError("all members must live on the same grid")
        pairings.append(monomial_pairings(f, degree, mask))
        magnitude = f.pointwise_norm()[mask]
        masses.append(float(np.sum(magnitude**q) * cell))
        tails.append([_tail(magnitude, m, q, cell) for m in levels])
        if cone is not None:
            violations.append(polar_diagnostics(f, cone, mask=mask).violations)
    weakstar = np.array(pairings)
    steps = [
        float(np.max(np.abs(weakstar[i + 1] - weakstar[i]))) for i in range(len(fields) - 1)
    ]
    tail_array = np.array(tails)
    largest = max(masses)
    equiintegrable = bool(np.all(tail_array[:, -1] <= EQUIINTEGRABLE_RATIO * largest))
    logger.debug("tails at M=%g: %s", levels[-1], tail_array[:, -1].tolist())
    return CompactnessDiagnostics(
        weakstar=weakstar,
        weakstar_steps=steps,
        tails=tail_array,
        masses=masses,
        thresholds=levels,
        equiintegrable=equiintegrable,
        cone_violations=violations if cone is not None else None,
    )
