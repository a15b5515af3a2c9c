"""Sampled analysis of an operator over the unit frequency sphere.

Every certificate computed here is a statement about the sample, not a proof:
ranks, kernels and images are evaluated at the points of a SphereSample (plus,
for rank profiles, a refinement pass near rank transitions).
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from wavecone.cones.geometry import ConeSpec, SubspaceSpec
from wavecone.cones.linalg import (
    DEFAULT_RANK_TOL,
    image_basis,
    intersect_subspaces,
    kernel_basis,
    rank_batch,
)
from wavecone.cones.sphere import SphereSample
from wavecone.errors import DimensionError
from wavecone.operators.spec import OperatorSpec

logger = logging.getLogger(__name__)

DEFAULT_ANGLE_TOL = 1e-8
SAMPLED = "sampled"


class RankProfile(NamedTuple):
    """Ranks of the reduced symbol over a sphere sample."""

    min_rank: int
    max_rank: int
    is_constant_rank: bool
    ranks: np.ndarray
    refined_points: int
    label: str = SAMPLED


class EllipticityDistance(NamedTuple):
    """Smallest distance between sampled unit directions of a cone and a subspace L.

    ``delta`` is +inf (with ``elliptic`` set) when there is nothing to measure.
    """

    delta: float
    elliptic: bool
    frequency: np.ndarray | None


class CancelingResult(NamedTuple):
    is_canceling: bool
    intersection_dim: int
    intersection_basis: np.ndarray
    history: list[int]


class CocancelingResult(NamedTuple):
    """Rigidity certificate: True when no nonzero common kernel element lies in the cone."""

    certificate: bool
    witness: np.ndarray | None
    kernel_intersection_dim: int
    alignment: float


@dataclass(frozen=True, eq=False)
class WaveConeSample:
    """Unit directions of the wave cone paired with their generating frequencies."""

    directions: np.ndarray
    generating_freqs: np.ndarray
    rank_tol: float

    def __len__(self) -> int:
        return int(self.directions.shape[0])

    @property
    def is_empty(self) -> bool:
        return len(self) == 0


def _check_sample(op: OperatorSpec, sample: SphereSample) -> None:
    if len(sample) == 0:
        raise DimensionError("sphere sample is empty")
    if sample.d != op.d:
        raise DimensionError(f"sample lives in R^{sample.d} but the operator has d={op.d}")


def _check_subspace(L: SubspaceSpec, ambient: int, what: str) -> None:
    if L.ambient != ambient:
        raise DimensionError(f"subspace lives in R^{L.ambient} but {what} has dimension {ambient}")


def rank_profile(
    op: OperatorSpec,
    sample: SphereSample,
    rank_tol: float = DEFAULT_RANK_TOL,
    refine: bool = True,
) -> RankProfile:
    """Compute min/max rank of A(xi) over the sample.

    With ``refine``, each point whose nearest neighbour has a different rank
    contributes the normalized midpoint of the pair as an extra sample.
    """
    _check_sample(op, sample)
    points = sample.points
    ranks = rank_batch(op, points, rank_tol)
    refined = 0
    if refine and len(points) > 1 and ranks.min() != ranks.max():
        gram = points @ points.T
        np.fill_diagonal(gram, -np.inf)
        neighbours = np.argmax(gram, axis=1)
        differs = ranks != ranks[neighbours]
        mids = points[differs] + points[neighbours[differs]]
        norms = np.linalg.norm(mids, axis=1)
        mids = mids[norms > 1e-12] / norms[norms > 1e-12, None]
        if len(mids):
            ranks = np.concatenate([ranks, rank_batch(op, mids, rank_tol)])
            refined = len(mids)
            logger.debug("rank profile refined with %d midpoints", refined)
    lo, hi = int(ranks.min()), int(ranks.max())
    return RankProfile(
        min_rank=lo, max_rank=hi, is_constant_rank=lo == hi, ranks=ranks, refined_points=refined
    )


def wave_cone_sample(
    op: OperatorSpec,
    sample: SphereSample,
    rank_tol: float = DEFAULT_RANK_TOL,
    per_frequency: int = 5,
    seed: int = 0,
) -> WaveConeSample:
    """Collect kernel directions of A(xi) at every sampled frequency.

    Each nontrivial kernel contributes its orthonormal basis plus
    ``per_frequency`` seeded random unit combinations of it.
    """
    _check_sample(op, sample)
    rng = np.random.default_rng(seed)
    directions: list[np.ndarray] = []
    freqs: list[np.ndarray] = []
    for xi in sample.points:
        basis = kernel_basis(op, xi, rank_tol)
        r = basis.shape[1]
        if r == 0:
            continue
        vectors = [basis.T]
        if per_frequency > 0:
            mix = rng.standard_normal((per_frequency, r))
            mix /= np.linalg.norm(mix, axis=1, keepdims=True)
            vectors.append(mix @ basis.T)
        block = np.concatenate(vectors, axis=0)
        directions.append(block)
        freqs.append(np.repeat(xi[None, :], block.shape[0], axis=0))
    if not directions:
        return WaveConeSample(
            directions=np.zeros((0, op.dim_v)), generating_freqs=np.zeros((0, op.d)), rank_tol=rank_tol
        )
    return WaveConeSample(
        directions=np.concatenate(directions, axis=0),
        generating_freqs=np.concatenate(freqs, axis=0),
        rank_tol=rank_tol,
    )


def _min_subspace_gap(
    bases: list[tuple[np.ndarray, np.ndarray]], L: SubspaceSpec, rank_tol: float
) -> EllipticityDistance:
    complement = np.eye(L.ambient) - L.projector()
    best, best_xi = np.inf, None
    for xi, basis in bases:
        if basis.shape[1] == 0:
            continue
        gap = float(np.linalg.svd(complement @ basis, compute_uv=False).min())
        if gap < best:
            best, best_xi = gap, xi
    if best_xi is None:
        return EllipticityDistance(delta=float("inf"), elliptic=True, frequency=None)
    if best <= rank_tol:
        best = 0.0
    return EllipticityDistance(delta=best, elliptic=False, frequency=best_xi)


def ellipticity_distance(
    op: OperatorSpec,
    L: SubspaceSpec,
    sample: SphereSample,
    rank_tol: float = DEFAULT_RANK_TOL,
) -> EllipticityDistance:
    """delta_L = min over sampled unit v in ker A(xi) of dist(v, L).

    Per frequency the minimum over the unit kernel sphere is the smallest
    singular value of (I - P_L) Q, Q an orthonormal kernel basis.
    """
    _check_sample(op, sample)
    _check_subspace(L, op.dim_v, "V")
    bases = [(xi, kernel_basis(op, xi, rank_tol)) for xi in sample.points]
    result = _min_subspace_gap(bases, L, rank_tol)
    logger.debug("delta_L for %s: %s", L.label or "L", result.delta)
    return result


def image_distance(
    op: OperatorSpec,
    L: SubspaceSpec,
    sample: SphereSample,
    rank_tol: float = DEFAULT_RANK_TOL,
) -> EllipticityDistance:
    """Min over sampled xi of the distance from unit vectors of im A(xi) to L."""
    _check_sample(op, sample)
    _check_subspace(L, op.dim_w, "W")
    bases = [(xi, image_basis(op, xi, rank_tol)) for xi in sample.points]
    return _min_subspace_gap(bases, L, rank_tol)


def canceling_check(
    op: OperatorSpec,
    sample: SphereSample,
    rank_tol: float = DEFAULT_RANK_TOL,
    angle_tol: float = DEFAULT_ANGLE_TOL,
) -> CancelingResult:
    """Intersect im A(xi) over the sample; canceling iff the intersection is {0}.

    The dimension history is non-increasing; iteration stops early once it hits 0.
    """
    _check_sample(op, sample)
    points = sample.points
    basis = image_basis(op, points[0], rank_tol)
    history = [int(basis.shape[1])]
    for xi in points[1:]:
        if basis.shape[1] == 0:
            break
        basis = intersect_subspaces(basis, image_basis(op, xi, rank_tol), angle_tol)
        history.append(int(basis.shape[1]))
    dim = int(basis.shape[1])
    return CancelingResult(
        is_canceling=dim == 0, intersection_dim=dim, intersection_basis=basis, history=history
    )


def kernel_intersection(
    op: OperatorSpec,
    sample: SphereSample,
    rank_tol: float = DEFAULT_RANK_TOL,
    angle_tol: float = DEFAULT_ANGLE_TOL,
) -> np.ndarray:
    """Orthonormal columns spanning the intersection of ker A(xi) over the sample."""
    _check_sample(op, sample)
    basis = np.eye(op.dim_v)
    for xi in sample.points:
        basis = intersect_subspaces(basis, kernel_basis(op, xi, rank_tol), angle_tol)
        if basis.shape[1] == 0:
            break
    return basis


def cocanceling_rigidity(
    op: OperatorSpec,
    cone: ConeSpec,
    sample: SphereSample,
    rank_tol: float = DEFAULT_RANK_TOL,
    angle_tol: float = DEFAULT_ANGLE_TOL,
) -> CocancelingResult:
    """Decide whether N = intersection of ker A(xi) meets the cone K_eps only at 0.

    A unit n has n.e <= |P_N e|, with equality at n = P_N e / |P_N e|, and a unit
    vector lies in K_eps iff n.e >= 1/sqrt(1 + (2 eps)^2). So N meets the cone
    exactly when |P_N e| reaches that threshold.
    """
    if cone.dim != op.dim_v:
        raise DimensionError(f"cone lives in R^{cone.dim} but V has dimension {op.dim_v}")
    common = kernel_intersection(op, sample, rank_tol, angle_tol)
    dim = int(common.shape[1])
    if dim == 0:
        return CocancelingResult(certificate=True, witness=None, kernel_intersection_dim=0, alignment=0.0)
    projected = common @ (common.T @ cone.axis)
    alignment = float(np.linalg.norm(projected))
    threshold = 1.0 / np.sqrt(1.0 + cone.slope**2)
    if alignment >= threshold - angle_tol:
        witness = projected / alignment
        return CocancelingResult(
            certificate=False, witness=witness, kernel_intersection_dim=dim, alignment=alignment
        )
    return CocancelingResult(
        certificate=True, witness=None, kernel_intersection_dim=dim, alignment=alignment
    )
