"""Deterministic samples of the unit frequency sphere."""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

import numpy as np

from wavecone.errors import DimensionError

GOLDEN_ANGLE = np.pi * (3.0 - np.sqrt(5.0))


class SphereScheme(str, Enum):
    """How the non-axis points were generated."""

    FIBONACCI = "fibonacci"
    GAUSSIAN = "gaussian"
    AXES = "axes-augmented"


@dataclass(frozen=True, eq=False)
class SphereSample:
    """Unit frequencies; the coordinate axes +-e_i are always the last 2d rows."""

    points: np.ndarray
    seed: int
    scheme: SphereScheme

    @property
    def d(self) -> int:
        return int(self.points.shape[1])

    def __len__(self) -> int:
        return int(self.points.shape[0])


def _axes(d: int) -> np.ndarray:
    eye = np.eye(d)
    return np.concatenate([eye, -eye], axis=0)


def _fibonacci(d: int, count: int, offset: float) -> np.ndarray:
    i = np.arange(count, dtype=np.float64)
    theta = offset + i * GOLDEN_ANGLE
    if d == 2:
        return np.stack([np.cos(theta), np.sin(theta)], axis=1)
    z = 1.0 - (2.0 * i + 1.0) / count
    rho = np.sqrt(1.0 - z**2)
    return np.stack([rho * np.cos(theta), rho * np.sin(theta), z], axis=1)


def sphere_sample(d: int, N: int, seed: int = 0) -> SphereSample:
    """Sample N points of S^{d-1} and append the axes.

    Fibonacci lattice (rotated by a seeded offset) for d = 2, 3; normalized
    seeded Gaussians for d >= 4. In d = 1 the sphere is {+1, -1}.

    Raises:
        DimensionError: If N < 2d
    """
    if d < 1:
        raise DimensionError(f"d must be >= 1, got {d}")
    if N < 2 * d:
        raise DimensionError(f"sample size N={N} is below 2d={2 * d}")
    rng = np.random.default_rng(seed)
    if d == 1:
        return SphereSample(points=_axes(1), seed=seed, scheme=SphereScheme.AXES)
    if d <= 3:
        body = _fibonacci(d, N, offset=float(rng.uniform(0.0, 2.0 * np.pi)))
        scheme = SphereScheme.FIBONACCI
    else:
        body = rng.standard_normal((N, d))
        scheme = SphereScheme.GAUSSIAN
    points = np.concatenate([body, _axes(d)], axis=0)
    points = points / np.linalg.norm(points, axis=1, keepdims=True)
    return SphereSample(points=points, seed=seed, scheme=scheme)


def random_unit_vectors(d: int, count: int, seed: int) -> np.ndarray:
    """Seeded uniform directions, shape (count, d)."""
    rng = np.random.default_rng(seed)
    xs = rng.standard_normal((count, d))
    return xs / np.linalg.norm(xs, axis=1, keepdims=True)
