"""Lebesgue, Bessel-potential and Riesz-potential quantities on torus fields."""

from __future__ import annotations

import logging
from typing import NamedTuple

import numpy as np

from wavecone.errors import DimensionError, ParameterRangeError
from wavecone.spectral.grid import TorusField, TorusGrid, random_field
from wavecone.spectral.multipliers import (
    MultiplierFn,
    ZeroModePolicy,
    apply_multiplier,
    scalar_multiplier,
)

logger = logging.getLogger(__name__)


def lq_norm(f: TorusField, q: float, mask: np.ndarray | None = None) -> float:
    """Rectangle-rule L^q norm of |f| over the torus, or over a boolean mask.

    q = inf gives the max norm.
    """
    if not q >= 1.0:
        raise ParameterRangeError(f"L^q norms need q >= 1, got {q}")
    magnitude = f.pointwise_norm()
    if mask is not None:
        if mask.shape != f.grid.shape:
            raise DimensionError(f"mask shape {mask.shape} does not match grid {f.grid.shape}")
        magnitude = magnitude[mask]
    if magnitude.size == 0:
        return 0.0
    if np.isinf(q):
        return float(magnitude.max())
    return float((f.grid.cell_volume * np.sum(magnitude**q)) ** (1.0 / q))


def fourier_l2_norm(f: TorusField) -> float:
    """L^2 norm from the spectrum (Parseval)."""
    return float(np.sqrt(np.sum(np.abs(f.spectrum()) ** 2)) / f.grid.size)


def bessel_multiplier(dim: int, s: float) -> MultiplierFn:
    return scalar_multiplier(
        lambda z: (1.0 + np.sum((2.0 * np.pi * z) ** 2, axis=1)) ** (s / 2.0),
        dim,
        ZeroModePolicy.IDENTITY,
        label=f"bessel[{s}]",
    )


def bessel_potential(f: TorusField, s: float) -> TorusField:
    """F^{-1}[(1 + |2 pi zeta|^2)^{s/2} f^]."""
    return apply_multiplier(f, bessel_multiplier(f.dim, s))


def bessel_norm(f: TorusField, s: float, q: float, mask: np.ndarray | None = None) -> float:
    """L^q norm of the Bessel potential of order s; negative s is the dual-Sobolev proxy.

    Raises:
        ParameterRangeError: If q is not in (1, inf)
    """
    if not 1.0 < q < np.inf:
        raise ParameterRangeError(f"Bessel norms need q in (1, inf), got {q}")
    if s == 0:
        return lq_norm(f, q, mask)
    return lq_norm(bessel_potential(f, s), q, mask)


def riesz_multiplier(dim: int, s: float) -> MultiplierFn:
    return scalar_multiplier(
        lambda z: (2.0 * np.pi * np.linalg.norm(z, axis=1)) ** (-s),
        dim,
        ZeroModePolicy.ZERO,
        label=f"riesz[{s}]",
    )


def riesz_potential(f: TorusField, s: float) -> TorusField:
    """I_s f = F^{-1}[|2 pi zeta|^{-s} f^] with the mean removed.

    Raises:
        ParameterRangeError: If s is not in (0, d)
    """
    d = f.grid.d
    if not 0.0 < s < d:
        raise ParameterRangeError(f"Riesz potential order must lie in (0, {d}), got {s}")
    return apply_multiplier(f, riesz_multiplier(f.dim, s))


class MihlinRow(NamedTuple):
    n: int
    q: float
    ratio: float


def mihlin_ratio(
    m: MultiplierFn,
    d: int,
    grid_sizes: tuple[int, ...] = (32, 64, 128),
    q: float = 2.0,
    seeds: int = 50,
    bandwidth: int = 6,
) -> list[MihlinRow]:
    """Operator-norm proxy max_f |T f|_q / |f|_q over seeded random fields, per resolution.

    The random fields are the same trigonometric polynomials on every grid, so
    growth across rows would come from the multiplier, not the data.
    """
    rows = []
    for n in grid_sizes:
        grid = TorusGrid(d=d, n=n)
        best = 0.0
        for seed in range(seeds):
            f = random_field(grid, m.dim_in, seed, bandwidth)
            best = max(best, lq_norm(apply_multiplier(f, m), q) / lq_norm(f, q))
        logger.debug("Mihlin ratio at n=%d, q=%s: %.6f", n, q, best)
        rows.append(MihlinRow(n=n, q=q, ratio=best))
    return rows
