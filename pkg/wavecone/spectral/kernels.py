"""A-representatives and sampled fundamental kernels of constant-rank operators."""

from __future__ import annotations

import logging
from dataclasses import dataclass
from itertools import combinations
from typing import NamedTuple

import numpy as np

from wavecone.cones.analysis import rank_profile
from wavecone.cones.linalg import DEFAULT_RANK_TOL, pseudoinverse_batch, rank_batch
from wavecone.cones.sphere import sphere_sample
from wavecone.errors import ConstantRankError, DimensionError
from wavecone.operators.spec import OperatorSpec
from wavecone.spectral.grid import TorusField, TorusGrid
from wavecone.spectral.multipliers import apply_multiplier, projection_multiplier

logger = logging.getLogger(__name__)


def a_representative(
    op: OperatorSpec, u: TorusField, rank_tol: float = DEFAULT_RANK_TOL
) -> TorusField:
    """u_A = F^{-1}[pi(zeta) u^(zeta)], the zero mode passed through.

    Logs a warning when the sampled rank of A(xi) is not constant.
    """
    if u.dim != op.dim_v:
        raise DimensionError(f"field has dim {u.dim}, operator acts on dimV={op.dim_v}")
    profile = rank_profile(op, sphere_sample(op.d, max(64, 2 * op.d), 0), rank_tol, refine=False)
    if not profile.is_constant_rank:
        logger.warning(
            "%s is not of constant rank on the sample (ranks %d..%d); u_A may be irregular",
            op.label(),
            profile.min_rank,
            profile.max_rank,
        )
    return apply_multiplier(u, projection_multiplier(op, rank_tol))


@dataclass(frozen=True, eq=False)
class KernelSample:
    """K_A sampled on a periodic grid centred at index 0.

    ``values`` has shape (dimV, dimW, *grid.shape); ``spectrum`` holds the
    per-frequency multiplier c(zeta) A(zeta)^+ used for convolution.
    """

    grid: TorusGrid
    values: np.ndarray
    spectrum: np.ndarray
    k: int
    cutoff: float
    log_mode: bool

    @property
    def expected_ratio(self) -> float:
        """|K(2x)| / |K(x)| for a kernel homogeneous of degree k - d."""
        return 2.0 ** (self.k - self.grid.d)

    def norm_at(self, offset: np.ndarray) -> float:
        """Frobenius norm of K at an integer cell offset from the origin."""
        index = tuple(int(i) % self.grid.n for i in offset)
        return float(np.linalg.norm(self.values[(slice(None), slice(None), *index)]))


def _cutoff(lattice: np.ndarray, radius: float) -> np.ndarray:
    return np.exp(-((np.linalg.norm(lattice, axis=1) / radius) ** 4))


def kernel_eval(
    op: OperatorSpec,
    n: int,
    cutoff: float | None = None,
    rank_tol: float = DEFAULT_RANK_TOL,
) -> KernelSample:
    """Sample K = F^{-1}[c(zeta) A(zeta)^+] with c(zeta) = exp(-(|zeta|/R)^4).

    R defaults to n/4. With this normalization K * (A u) = u_A on the torus
    for fields whose spectrum sits where c = 1.

    Raises:
        ConstantRankError: If the symbol rank varies on the lattice
    """
    grid = TorusGrid(d=op.d, n=n)
    radius = float(cutoff) if cutoff is not None else n / 4.0
    lattice = grid.lattice
    ranks = rank_batch(op, lattice[1:], rank_tol)
    if ranks.min() != ranks.max():
        raise ConstantRankError(
            f"{op.label()} has ranks {int(ranks.min())}..{int(ranks.max())} on the n={n} lattice"
        )
    inverse = pseudoinverse_batch(op, lattice, rank_tol)
    inverse[0] = 0.0
    spectrum = inverse * _cutoff(lattice, radius)[:, None, None]
    spectrum = np.moveaxis(spectrum, 0, -1).reshape(op.dim_v, op.dim_w, *grid.shape)
    values = grid.size * np.fft.ifftn(spectrum, axes=tuple(range(2, 2 + grid.d))).real
    log_mode = op.k >= op.d
    if log_mode:
        logger.info("k >= d for %s: kernel is logarithmic, homogeneity check skipped", op.label())
    return KernelSample(
        grid=grid, values=values, spectrum=spectrum, k=op.k, cutoff=radius, log_mode=log_mode
    )


def convolve(sample: KernelSample, g: TorusField) -> TorusField:
    """Periodic K * g, computed as F^{-1}[K^(zeta) g^(zeta)]."""
    if g.grid != sample.grid:
        raise DimensionError("field and kernel live on different grids")
    if g.dim != sample.values.shape[1]:
        raise DimensionError(f"kernel expects fields of dim {sample.values.shape[1]}")
    out = np.einsum("ij...,j...->i...", sample.spectrum, g.spectrum())
    return TorusField.from_spectrum(g.grid, out, real=g.real)


def lattice_rays(d: int) -> list[np.ndarray]:
    """+-e_i and +-(e_i +- e_j): 2d + 2d(d - 1) integer directions."""
    eye = np.eye(d, dtype=int)
    rays = [s * eye[i] for i in range(d) for s in (1, -1)]
    for i, j in combinations(range(d), 2):
        for si in (1, -1):
            for sj in (1, -1):
                rays.append(si * eye[i] + sj * eye[j])
    return rays


def kernel_smoothness(sample: KernelSample, r_min: float = 0.1, r_max: float = 0.4) -> float:
    """Max finite-difference gradient of |K| on the annulus r_min <= |x| <= r_max."""
    grid = sample.grid
    centred = np.where(grid.coordinates > 0.5, grid.coordinates - 1.0, grid.coordinates)
    radius = np.linalg.norm(centred, axis=0)
    annulus = (radius >= r_min) & (radius <= r_max)
    magnitude = np.sqrt(np.sum(sample.values**2, axis=(0, 1)))
    gradient = np.gradient(magnitude, grid.h)
    gradient = np.stack(gradient) if grid.d > 1 else gradient[None, :]
    slope = np.linalg.norm(gradient, axis=0)
    return float(slope[annulus].max())


class HomogeneityReport(NamedTuple):
    """Ray ratios against 2^(k - d), plus the annulus slope of |K|."""

    ratios: list[float]
    expected: float
    max_rel_error: float
    skipped: bool
    annulus_slope: float


def homogeneity_check(sample: KernelSample, offset_cells: int = 8) -> HomogeneityReport:
    """Compare |K(2x)| / |K(x)| along the lattice rays with 2^(k - d).

    The annulus slope from kernel_smoothness is reported in every mode.

    Raises:
        ValueError: If 2 * offset_cells does not fit in half the grid
    """
    if 2 * offset_cells >= sample.grid.n // 2:
        raise ValueError(f"offset {offset_cells} cells is too large for n={sample.grid.n}")
    slope = kernel_smoothness(sample)
    if sample.log_mode:
        nan = float("nan")
        return HomogeneityReport(
            ratios=[], expected=nan, max_rel_error=nan, skipped=True, annulus_slope=slope
        )
    ratios = []
    for ray in lattice_rays(sample.grid.d):
        near = sample.norm_at(offset_cells * ray)
        far = sample.norm_at(2 * offset_cells * ray)
        ratios.append(far / near if near > 0 else float("inf"))
    expected = sample.expected_ratio
    error = max(abs(r - expected) / expected for r in ratios)
    return HomogeneityReport(
        ratios=ratios, expected=expected, max_rel_error=error, skipped=False, annulus_slope=slope
    )
