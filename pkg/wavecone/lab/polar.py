"""Pointwise cone diagnostics of a field's polar directions."""

from __future__ import annotations

from typing import NamedTuple

import numpy as np

from wavecone.cones.geometry import MEMBERSHIP_TOL, ConeSpec
from wavecone.errors import DimensionError
from wavecone.spectral.grid import TorusField

NOISE_FLOOR = 1e-12


class PolarDiagnostics(NamedTuple):
    """Distances of f/|f| to the cone and the split f = P0 + P1 along L."""

    max_dist: float
    l1_dist: float
    m_inf: float
    violations: int
    points: int


def polar_diagnostics(
    f: TorusField,
    cone: ConeSpec,
    mask: np.ndarray | None = None,
    tol: float = MEMBERSHIP_TOL,
) -> PolarDiagnostics:
    """Cone distances of the polars of f and sup |P1| / |P0| with P0 = proj_L f.

    ``l1_dist`` weights each polar distance by |f| (the |mu|-integral of the
    distance). ``m_inf`` is infinite when some nonzero value projects to 0 in L.
    Zero values carry no polar and are skipped.
    """
    if f.dim != cone.dim:
        raise DimensionError(f"field has dim {f.dim}, cone lives in R^{cone.dim}")
    rows = np.real_if_close(f.pointwise_values())
    if np.iscomplexobj(rows):
        raise ValueError("polar diagnostics need a real field")
    if mask is not None:
        rows = rows[mask.ravel()]
    magnitude = np.linalg.norm(rows, axis=1)
    scale = magnitude.max() if magnitude.size else 0.0
    live = magnitude > NOISE_FLOOR * scale if scale > 0 else np.zeros(magnitude.shape, dtype=bool)
    if not np.any(live):
        return PolarDiagnostics(0.0, 0.0, 0.0, 0, 0)
    values, weights = rows[live], magnitude[live]
    polars = values / weights[:, None]
    dist = cone.distance(polars)
    along = cone.subspace.project(values)
    across = np.linalg.norm(values - along, axis=1)
    along_norm = np.linalg.norm(along, axis=1)
    with np.errstate(divide="ignore", invalid="ignore"):
        ratio = np.where(along_norm > 0, across / along_norm, np.inf)
    violations = int(np.count_nonzero(~cone.contains(polars, tol)))
    return PolarDiagnostics(
        max_dist=float(dist.max()),
        l1_dist=float(np.sum(dist * weights) * f.grid.cell_volume),
        m_inf=float(ratio.max()),
        violations=violations,
        points=int(live.sum()),
    )
