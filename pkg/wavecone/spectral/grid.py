"""Periodic grids on the unit torus and fields sampled on them.

Frequencies live on the integer lattice in numpy FFT order, so a lattice
point zeta pairs with the plane wave exp(2 pi i zeta.x). All arrays index the
grid with ``indexing="ij"``.
"""

from __future__ import annotations

from collections.abc import Callable
from dataclasses import dataclass
from functools import cached_property

import numpy as np

from wavecone.errors import DimensionError, ResolutionError

MIN_POINTS = 8


@dataclass(frozen=True)
class TorusGrid:
    """n^d equispaced points of [0, 1)^d; n is a power of two, at least 8."""

    d: int
    n: int

    def __post_init__(self) -> None:
        if self.d < 1:
            raise DimensionError(f"d must be >= 1, got {self.d}")
        if self.n < MIN_POINTS or self.n & (self.n - 1):
            raise ResolutionError(f"grid size must be a power of two >= {MIN_POINTS}, got {self.n}")

    @property
    def h(self) -> float:
        return 1.0 / self.n

    @property
    def shape(self) -> tuple[int, ...]:
        return (self.n,) * self.d

    @property
    def size(self) -> int:
        return self.n**self.d

    @property
    def cell_volume(self) -> float:
        return self.h**self.d

    @property
    def axes(self) -> tuple[int, ...]:
        """FFT axes of a (dim, *shape) value array."""
        return tuple(range(1, self.d + 1))

    @cached_property
    def frequency_grid(self) -> np.ndarray:
        """Integer frequencies, shape (d, *shape)."""
        freqs = np.fft.fftfreq(self.n, d=1.0 / self.n)
        return np.stack(np.meshgrid(*([freqs] * self.d), indexing="ij"))

    @cached_property
    def lattice(self) -> np.ndarray:
        """Integer frequencies flattened to shape (n^d, d)."""
        return self.frequency_grid.reshape(self.d, -1).T.copy()

    @cached_property
    def coordinates(self) -> np.ndarray:
        """Grid points x = i / n, shape (d, *shape)."""
        x = np.arange(self.n) / self.n
        return np.stack(np.meshgrid(*([x] * self.d), indexing="ij"))

    @cached_property
    def points(self) -> np.ndarray:
        return self.coordinates.reshape(self.d, -1).T.copy()


@dataclass(frozen=True, eq=False)
class TorusField:
    """dim-valued samples on a TorusGrid, stored as an array of shape (dim, *grid.shape).

    Real dtype marks a real field; FFT-based operations preserve it whenever
    the applied multiplier is Hermitian.
    """

    grid: TorusGrid
    values: np.ndarray

    def __post_init__(self) -> None:
        values = np.asarray(self.values)
        if values.ndim == self.grid.d:
            values = values[None, ...]
        if values.shape[1:] != self.grid.shape:
            raise DimensionError(
                f"field values have shape {values.shape}, expected (dim, {self.grid.shape})"
            )
        if not np.all(np.isfinite(values)):
            raise ValueError("field has non-finite values")
        if np.iscomplexobj(values):
            values = values.astype(np.complex128)
        else:
            values = values.astype(np.float64)
        object.__setattr__(self, "values", values)

    @property
    def dim(self) -> int:
        return int(self.values.shape[0])

    @property
    def real(self) -> bool:
        return not np.iscomplexobj(self.values)

    @property
    def flat(self) -> np.ndarray:
        """Values as (dim, n^d)."""
        return self.values.reshape(self.dim, -1)

    def spectrum(self) -> np.ndarray:
        """Unnormalized DFT over the grid axes, shape (dim, *shape)."""
        return np.fft.fftn(self.values, axes=self.grid.axes)

    @classmethod
    def from_spectrum(cls, grid: TorusGrid, spectrum: np.ndarray, real: bool) -> TorusField:
        values = np.fft.ifftn(spectrum, axes=grid.axes)
        return cls(grid=grid, values=values.real if real else values)

    @classmethod
    def zeros(cls, grid: TorusGrid, dim: int) -> TorusField:
        return cls(grid=grid, values=np.zeros((dim, *grid.shape)))

    @classmethod
    def constant(cls, grid: TorusGrid, value: np.ndarray | list[float]) -> TorusField:
        v = np.asarray(value)
        return cls(grid=grid, values=v.reshape(-1, *([1] * grid.d)) * np.ones(grid.shape))

    @classmethod
    def plane_wave(
        cls, grid: TorusGrid, zeta: np.ndarray | list[int], amplitude: np.ndarray | list[complex]
    ) -> TorusField:
        """amplitude * exp(2 pi i zeta.x)."""
        zeta = np.asarray(zeta, dtype=np.float64)
        phase = np.exp(2j * np.pi * np.tensordot(zeta, grid.coordinates, axes=1))
        amp = np.asarray(amplitude, dtype=np.complex128)
        return cls(grid=grid, values=amp.reshape(-1, *([1] * grid.d)) * phase[None, ...])

    @classmethod
    def from_function(
        cls, grid: TorusGrid, fn: Callable[[np.ndarray], np.ndarray]
    ) -> TorusField:
        """Sample fn at the grid coordinates; fn maps (d, *shape) to (dim, *shape)."""
        return cls(grid=grid, values=fn(grid.coordinates))

    def _check_compatible(self, other: TorusField) -> None:
        if other.grid != self.grid or other.dim != self.dim:
            raise DimensionError("fields live on different grids or have different dimensions")

    def __add__(self, other: TorusField) -> TorusField:
        self._check_compatible(other)
        return TorusField(grid=self.grid, values=self.values + other.values)

    def __sub__(self, other: TorusField) -> TorusField:
        self._check_compatible(other)
        return TorusField(grid=self.grid, values=self.values - other.values)

    def scale(self, c: float | complex) -> TorusField:
        return TorusField(grid=self.grid, values=c * self.values)

    def pointwise_norm(self) -> np.ndarray:
        """Euclidean norm of the values at every grid point, shape grid.shape."""
        return np.sqrt(np.sum(np.abs(self.values) ** 2, axis=0))

    def integral(self) -> np.ndarray:
        """Rectangle-rule integral of every component over the torus."""
        return self.flat.sum(axis=1) * self.grid.cell_volume

    def pointwise_values(self) -> np.ndarray:
        """Values as rows, shape (n^d, dim)."""
        return self.flat.T


def random_field(
    grid: TorusGrid, dim: int, seed: int, bandwidth: int | None = None
) -> TorusField:
    """Real, band-limited field with unit RMS.

    Spectral coefficients are drawn on the cube |zeta|_inf <= bandwidth in a
    fixed order, so the same (dim, seed, bandwidth) gives the same
    trigonometric polynomial on every grid that resolves it.

    Raises:
        ResolutionError: If bandwidth >= n/2
    """
    band = grid.n // 4 if bandwidth is None else bandwidth
    if band < 1 or band >= grid.n // 2:
        raise ResolutionError(f"bandwidth {band} is not resolved by n={grid.n}")
    rng = np.random.default_rng(seed)
    shape = (dim,) + (2 * band + 1,) * grid.d
    coeffs = rng.standard_normal(shape) + 1j * rng.standard_normal(shape)
    index = np.arange(-band, band + 1) % grid.n
    spectrum = np.zeros((dim, *grid.shape), dtype=np.complex128)
    spectrum[(slice(None), *np.ix_(*([index] * grid.d)))] = coeffs
    values = np.fft.ifftn(spectrum, axes=grid.axes).real
    rms = np.sqrt(np.mean(np.sum(values**2, axis=0)))
    return TorusField(grid=grid, values=values / rms)
