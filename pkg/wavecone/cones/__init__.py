"""Wave cones, subspace distances and canceling checks on sampled frequency spheres."""

from wavecone.cones.analysis import (
    CancelingResult,
    CocancelingResult,
    EllipticityDistance,
    RankProfile,
    WaveConeSample,
    canceling_check,
    cocanceling_rigidity,
    ellipticity_distance,
    image_distance,
    kernel_intersection,
    rank_profile,
    wave_cone_sample,
)
from wavecone.cones.geometry import (
    ConeSpec,
    SubspaceSpec,
    conformal_subspace,
    identity_line,
    trace_free_symmetric,
)
from wavecone.cones.linalg import (
    image_basis,
    kernel_basis,
    projection_symbol,
    pseudoinverse_symbol,
)
from wavecone.cones.report import AnalysisReport, analysis_report
from wavecone.cones.sphere import SphereSample, SphereScheme, sphere_sample

__all__ = [
    "AnalysisReport",
    "CancelingResult",
    "CocancelingResult",
    "ConeSpec",
    "EllipticityDistance",
    "RankProfile",
    "SphereSample",
    "SphereScheme",
    "SubspaceSpec",
    "WaveConeSample",
    "analysis_report",
    "canceling_check",
    "cocanceling_rigidity",
    "conformal_subspace",
    "ellipticity_distance",
    "identity_line",
    "image_basis",
    "image_distance",
    "kernel_basis",
    "kernel_intersection",
    "projection_symbol",
    "pseudoinverse_symbol",
    "rank_profile",
    "sphere_sample",
    "trace_free_symmetric",
    "wave_cone_sample",
]
