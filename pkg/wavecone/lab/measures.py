"""Discretized vector measures on the torus, the sub-box Omega' and the mollifier.

A DiscreteMeasure is a density (V-valued samples w.r.t. Lebesgue measure on the
grid) plus finitely many atoms. Mollification uses the quartic bump
rho_t(x) = c (1 - |x|^2 / t^2)^4 on |x| < t, normalized so that its grid
quadrature is exactly one.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from itertools import product
from typing import NamedTuple

import numpy as np

from wavecone.cones.geometry import ConeSpec
from wavecone.errors import ConeViolationError, DimensionError, ResolutionError
from wavecone.lab.polar import NOISE_FLOOR
from wavecone.spectral.grid import TorusField, TorusGrid

logger = logging.getLogger(__name__)

OUTER_SIDE_FACTOR = 1.5


def quintic_step(t: np.ndarray) -> np.ndarray:
    """S(t) = 10t^3 - 15t^4 + 6t^5 clipped to [0, 1]; C^2 with S(0) = 0, S(1) = 1."""
    t = np.clip(t, 0.0, 1.0)
    return t**3 * (10.0 - 15.0 * t + 6.0 * t**2)


def quintic_step_d1(t: np.ndarray) -> np.ndarray:
    inside = (t > 0.0) & (t < 1.0)
    return np.where(inside, 30.0 * t**2 * (1.0 - t) ** 2, 0.0)


def quintic_step_d2(t: np.ndarray) -> np.ndarray:
    inside = (t > 0.0) & (t < 1.0)
    return np.where(inside, 60.0 * t - 180.0 * t**2 + 120.0 * t**3, 0.0)


@dataclass(frozen=True)
class SubBox:
    """Closed axis-aligned box [lower, upper] inside [0, 1)^d."""

    lower: tuple[float, ...]
    upper: tuple[float, ...]

    def __post_init__(self) -> None:
        if len(self.lower) != len(self.upper) or not self.lower:
            raise DimensionError("box corners must have the same positive dimension")
        for lo, hi in zip(self.lower, self.upper):
            if not 0.0 <= lo < hi <= 1.0:
                raise ValueError(f"invalid box side [{lo}, {hi}]")

    @classmethod
    def centered(cls, d: int, side: float = 0.5) -> SubBox:
        if not 0.0 < side < 1.0:
            raise ValueError(f"box side must lie in (0, 1), got {side}")
        lo = 0.5 - side / 2.0
        return cls(lower=(lo,) * d, upper=(1.0 - lo,) * d)

    @property
    def d(self) -> int:
        return len(self.lower)

    @property
    def center(self) -> np.ndarray:
        return (np.asarray(self.lower) + np.asarray(self.upper)) / 2.0

    @property
    def half_sides(self) -> np.ndarray:
        return (np.asarray(self.upper) - np.asarray(self.lower)) / 2.0

    def _check(self, grid: TorusGrid) -> None:
        if grid.d != self.d:
            raise DimensionError(f"box lives in d={self.d}, grid in d={grid.d}")

    def mask(self, grid: TorusGrid) -> np.ndarray:
        """Grid points inside the closed box."""
        self._check(grid)
        offset = np.abs(grid.coordinates - self.center.reshape(-1, *([1] * grid.d)))
        return np.all(offset <= self.half_sides.reshape(-1, *([1] * grid.d)) + 1e-12, axis=0)

    def cutoff(self, grid: TorusGrid, factor: float = OUTER_SIDE_FACTOR) -> np.ndarray:
        """chi = 1 on the box, 0 outside the concentric box scaled by ``factor``.

        The default factor maps the centred side-1/2 box to side 3/4.
        """
        self._check(grid)
        if factor <= 1.0:
            raise ValueError("outer box must be strictly larger than the box")
        shape = (-1, *([1] * grid.d))
        inner = self.half_sides.reshape(shape)
        outer = factor * inner
        offset = np.abs(grid.coordinates - self.center.reshape(shape))
        ramp = (offset - inner) / (outer - inner)
        return np.prod(1.0 - quintic_step(ramp), axis=0)


class Atom(NamedTuple):
    location: np.ndarray
    weight: np.ndarray


@dataclass(frozen=True, eq=False)
class DiscreteMeasure:
    """density * Lebesgue + sum of weighted Dirac masses on a TorusGrid."""

    grid: TorusGrid
    dim: int
    density: np.ndarray | None = None
    atoms: tuple[Atom, ...] = ()
    support_box: SubBox | None = field(default=None)

    def __post_init__(self) -> None:
        if self.dim < 1:
            raise DimensionError("measure dimension must be positive")
        if self.density is not None:
            density = np.asarray(self.density, dtype=np.float64)
            if density.shape != (self.dim, *self.grid.shape):
                raise DimensionError(
                    f"density has shape {density.shape}, expected ({self.dim}, {self.grid.shape})"
                )
            if not np.all(np.isfinite(density)):
                raise ValueError("density must be finite")
            object.__setattr__(self, "density", density)
        atoms = []
        for atom in self.atoms:
            location = np.mod(np.asarray(atom.location, dtype=np.float64).ravel(), 1.0)
            weight = np.asarray(atom.weight, dtype=np.float64).ravel()
            if location.size != self.grid.d or weight.size != self.dim:
                raise DimensionError("atom location or weight has the wrong size")
            atoms.append(Atom(location, weight))
        object.__setattr__(self, "atoms", tuple(atoms))

    def total_variation(self) -> float:
        """|mu|(torus): quadrature of |density| plus the sum of |weights|."""
        total = 0.0
        if self.density is not None:
            total += float(np.sum(np.linalg.norm(self.density, axis=0)) * self.grid.cell_volume)
        total += float(sum(np.linalg.norm(a.weight) for a in self.atoms))
        return total

    def mass(self) -> np.ndarray:
        """Vector-valued mu(torus)."""
        total = np.zeros(self.dim)
        if self.density is not None:
            total += self.density.reshape(self.dim, -1).sum(axis=1) * self.grid.cell_volume
        for atom in self.atoms:
            total += atom.weight
        return total

    def polar_values(self) -> np.ndarray:
        """Unit directions d mu / d|mu| at every nonzero density sample and atom."""
        rows = []
        if self.density is not None:
            flat = self.density.reshape(self.dim, -1).T
            rows.append(flat[np.linalg.norm(flat, axis=1) > 0])
        if self.atoms:
            weights = [a.weight for a in self.atoms if np.any(a.weight)]
            rows.append(np.array(weights).reshape(-1, self.dim))
        if not rows:
            return np.zeros((0, self.dim))
        values = np.vstack(rows)
        return values / np.linalg.norm(values, axis=1, keepdims=True)

    def resample(self, grid: TorusGrid) -> DiscreteMeasure:
        """Same measure on another grid: atoms kept, density resampled spectrally."""
        if grid.d != self.grid.d:
            raise DimensionError("cannot resample across dimensions")
        density = None
        if self.density is not None:
            density = _spectral_resample(self.density, self.grid, grid)
        return DiscreteMeasure(
            grid=grid, dim=self.dim, density=density, atoms=self.atoms, support_box=self.support_box
        )

    @classmethod
    def zero(cls, grid: TorusGrid, dim: int) -> DiscreteMeasure:
        return cls(grid=grid, dim=dim)

    @classmethod
    def ball(
        cls, grid: TorusGrid, center: list[float], radius: float, value: list[float]
    ) -> DiscreteMeasure:
        """value times the indicator of the ball |x - center| <= radius."""
        value_arr = np.asarray(value, dtype=np.float64)
        c = np.asarray(center, dtype=np.float64).reshape(-1, *([1] * grid.d))
        inside = np.linalg.norm(grid.coordinates - c, axis=0) <= radius
        density = value_arr.reshape(-1, *([1] * grid.d)) * inside[None, ...]
        return cls(grid=grid, dim=value_arr.size, density=density)

    @classmethod
    def hyperplane(
        cls, grid: TorusGrid, axis: int, offset: float, weight: list[float]
    ) -> DiscreteMeasure:
        """weight times surface measure on {x_axis = offset}, one atom per plane cell."""
        if not 0 <= axis < grid.d:
            raise DimensionError(f"axis {axis} out of range for d={grid.d}")
        w = np.asarray(weight, dtype=np.float64) * grid.h ** (grid.d - 1)
        coords = np.arange(grid.n) * grid.h
        atoms = []
        for rest in product(coords, repeat=grid.d - 1):
            location = list(rest)
            location.insert(axis, offset)
            atoms.append(Atom(np.array(location), w))
        return cls(grid=grid, dim=w.size, atoms=tuple(atoms))

    @classmethod
    def point(cls, grid: TorusGrid, location: list[float], weight: list[float]) -> DiscreteMeasure:
        w = np.asarray(weight, dtype=np.float64)
        return cls(grid=grid, dim=w.size, atoms=(Atom(np.asarray(location), w),))


def _spectral_resample(values: np.ndarray, source: TorusGrid, target: TorusGrid) -> np.ndarray:
    axes = tuple(range(1, source.d + 1))
    spec = np.fft.fftn(values, axes=axes)
    keep = min(source.n, target.n) // 2
    index_src = np.r_[0:keep, source.n - keep + 1 : source.n]
    index_dst = np.r_[0:keep, target.n - keep + 1 : target.n]
    out = np.zeros((values.shape[0], *target.shape), dtype=np.complex128)
    out[(slice(None), *np.ix_(*([index_dst] * target.d)))] = spec[
        (slice(None), *np.ix_(*([index_src] * source.d)))
    ]
    out *= target.size / source.size
    return np.fft.ifftn(out, axes=axes).real


def bump(r2_over_t2: np.ndarray) -> np.ndarray:
    """Unnormalized quartic bump (1 - s)^4 on s < 1."""
    return np.where(r2_over_t2 < 1.0, (1.0 - r2_over_t2) ** 4, 0.0)


def mollifier_kernel(grid: TorusGrid, t: float) -> np.ndarray:
    """rho_t sampled at periodic displacements from the origin, grid sum times h^d = 1."""
    centred = np.where(grid.coordinates >= 0.5, grid.coordinates - 1.0, grid.coordinates)
    kernel = bump(np.sum(centred**2, axis=0) / t**2)
    return kernel / (kernel.sum() * grid.cell_volume)


def _deposit_atoms(measure: DiscreteMeasure, t: float) -> np.ndarray:
    grid = measure.grid
    out = np.zeros((measure.dim, grid.size))
    if not measure.atoms:
        return out
    reach = int(np.ceil(t / grid.h)) + 1
    offsets = np.array(list(product(range(-reach, reach + 1), repeat=grid.d)))
    locations = np.array([a.location for a in measure.atoms])
    weights = np.array([a.weight for a in measure.atoms])
    base = np.rint(locations / grid.h).astype(int)
    cells = base[:, None, :] + offsets[None, :, :]
    displacement = cells * grid.h - locations[:, None, :]
    rho = bump(np.sum(displacement**2, axis=2) / t**2)
    rho /= rho.sum(axis=1, keepdims=True) * grid.cell_volume
    wrapped = tuple(np.mod(cells[..., i], grid.n) for i in range(grid.d))
    flat = np.ravel_multi_index(wrapped, grid.shape)
    for c in range(measure.dim):
        np.add.at(out[c], flat.ravel(), (weights[:, c : c + 1] * rho).ravel())
    return out


def mollify(measure: DiscreteMeasure, t: float, cone: ConeSpec | None = None) -> TorusField:
    """mu_t = mu * rho_t as a real TorusField.

    Vector mass is preserved and the total variation does not increase. With a
    cone whose convexity holds every polar of mu, each output value is checked
    for membership.

    Raises:
        ResolutionError: If t < 2h or t >= 1/2
        ConeViolationError: If the output leaves a cone that holds every polar of mu
    """
    grid = measure.grid
    if t < 2.0 * grid.h or t >= 0.5:
        raise ResolutionError(f"mollifier scale t={t} needs 2h = {2.0 * grid.h} <= t < 1/2")
    values = _deposit_atoms(measure, t).reshape(measure.dim, *grid.shape)
    if measure.density is not None:
        kernel_hat = np.fft.fftn(mollifier_kernel(grid, t)) * grid.cell_volume
        spectrum = np.fft.fftn(measure.density, axes=grid.axes) * kernel_hat
        smoothed = np.fft.ifftn(spectrum, axes=grid.axes)
        values = values + smoothed.real
    result = TorusField(grid=grid, values=values)
    logger.debug("mollified %d atoms at t=%s on n=%d", len(measure.atoms), t, grid.n)
    if cone is not None and measure.dim == cone.dim:
        polars = measure.polar_values()
        if polars.size and np.all(cone.contains(polars)):
            rows = result.pointwise_values()
            magnitude = np.linalg.norm(rows, axis=1)
            live = magnitude > NOISE_FLOOR * magnitude.max()
            inside = cone.contains(rows[live], tol=1e-9)
            if not np.all(inside):
                raise ConeViolationError(
                    f"{int((~inside).sum())} mollified values left the cone at t={t}"
                )
    return result
