"""Analysis report: the JSON summary of a sampled operator analysis."""

from __future__ import annotations

import json
import logging
from pathlib import Path

import numpy as np
from pydantic import BaseModel, Field

from wavecone.cones.analysis import (
    SAMPLED,
    canceling_check,
    cocanceling_rigidity,
    ellipticity_distance,
    kernel_intersection,
    rank_profile,
    wave_cone_sample,
)
from wavecone.cones.geometry import ConeSpec, SubspaceSpec
from wavecone.cones.sphere import sphere_sample
from wavecone.config import AnalysisSettings
from wavecone.operators.spec import OperatorSpec, spec_hash

logger = logging.getLogger(__name__)


class RankProfileEntry(BaseModel):
    """Rank summary; ``label`` is always "sampled"."""

    min_rank: int
    max_rank: int
    refined_points: int = 0
    label: str = SAMPLED


class SubspaceDistance(BaseModel):
    """delta_L for one subspace; ``delta`` is None when the sampled wave cone is empty."""

    label: str
    dim: int
    delta: float | None
    elliptic: bool = False


class CocancelingEntry(BaseModel):
    certificate: bool
    witness: list[float] | None = None
    alignment: float


class WaveConeEntry(BaseModel):
    size: int
    per_frequency: int
    directions: list[list[float]] = Field(default_factory=list)


class AnalysisReport(BaseModel):
    """Result of analyze: rank profile, canceling data and subspace distances."""

    operator: str
    operator_hash: str
    d: int
    k: int
    dimV: int
    dimW: int
    rank_profile: RankProfileEntry
    is_constant_rank: bool
    is_canceling: bool
    canceling_dim: int
    cocanceling_dim: int
    delta_L: list[SubspaceDistance] = Field(default_factory=list)
    cocanceling: CocancelingEntry | None = None
    wave_cone: WaveConeEntry | None = None
    sample_size: int
    seed: int
    labels: list[str] = Field(default_factory=lambda: [SAMPLED])

    def to_json(self) -> str:
        return json.dumps(self.model_dump(mode="json"), indent=2, sort_keys=True)

    def write(self, path: Path) -> None:
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(self.to_json() + "\n")


def _finite_or_none(value: float) -> float | None:
    return float(value) if np.isfinite(value) else None


def analysis_report(
    op: OperatorSpec,
    subspaces: list[SubspaceSpec] | None = None,
    cone: ConeSpec | None = None,
    settings: AnalysisSettings | None = None,
    include_wave_cone: bool = False,
) -> AnalysisReport:
    """Run the sampled analysis of op and collect it into an AnalysisReport.

    Args:
        op: Operator specification
        subspaces: Subspaces L of V for which delta_L is reported
        cone: Optional cone for the cocanceling rigidity certificate
        settings: Tolerances and sampling parameters (defaults when omitted)
        include_wave_cone: Embed the sampled wave-cone directions

    Returns:
        AnalysisReport, deterministic for fixed settings
    """
    settings = settings or AnalysisSettings.default()
    sample = sphere_sample(op.d, max(settings.sample_size, 2 * op.d), settings.seed)
    logger.debug("analyzing %s on %d sphere points", op.label(), len(sample))

    profile = rank_profile(op, sample, settings.rank_tol, refine=settings.refine)
    canceling = canceling_check(op, sample, settings.rank_tol, settings.angle_tol)
    common = kernel_intersection(op, sample, settings.rank_tol, settings.angle_tol)

    distances = []
    for i, L in enumerate(subspaces or []):
        dist = ellipticity_distance(op, L, sample, settings.rank_tol)
        distances.append(
            SubspaceDistance(
                label=L.label or f"L{i}",
                dim=L.dim,
                delta=_finite_or_none(dist.delta),
                elliptic=dist.elliptic,
            )
        )

    cocanceling = None
    if cone is not None:
        rigidity = cocanceling_rigidity(op, cone, sample, settings.rank_tol, settings.angle_tol)
        cocanceling = CocancelingEntry(
            certificate=rigidity.certificate,
            witness=None if rigidity.witness is None else rigidity.witness.tolist(),
            alignment=rigidity.alignment,
        )

    wave_cone = None
    if include_wave_cone:
        cone_sample = wave_cone_sample(
            op, sample, settings.rank_tol, settings.per_frequency, settings.seed
        )
        wave_cone = WaveConeEntry(
            size=len(cone_sample),
            per_frequency=settings.per_frequency,
            directions=cone_sample.directions.tolist(),
        )

    return AnalysisReport(
        operator=op.label(),
        operator_hash=spec_hash(op),
        d=op.d,
        k=op.k,
        dimV=op.dim_v,
        dimW=op.dim_w,
        rank_profile=RankProfileEntry(
            min_rank=profile.min_rank,
            max_rank=profile.max_rank,
            refined_points=profile.refined_points,
        ),
        is_constant_rank=profile.is_constant_rank,
        is_canceling=canceling.is_canceling,
        canceling_dim=canceling.intersection_dim,
        cocanceling_dim=int(common.shape[1]),
        delta_L=distances,
        cocanceling=cocanceling,
        wave_cone=wave_cone,
        sample_size=len(sample),
        seed=settings.seed,
    )
