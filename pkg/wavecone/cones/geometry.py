"""Subspaces of V and the convex cones K_eps around them.

The cone used throughout is circular with half-slope 2 eps around a unit axis e
that lies in the subspace L:

    K_eps = {v : v.e >= 0, |v - (v.e) e| <= 2 eps (v.e)}
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
import scipy.linalg

from wavecone.errors import DimensionError

MEMBERSHIP_TOL = 1e-12


@dataclass(frozen=True, eq=False)
class SubspaceSpec:
    """Subspace of R^ambient with an orthonormal basis stored as rows."""

    basis: np.ndarray
    label: str = ""

    def __post_init__(self) -> None:
        raw = np.atleast_2d(np.asarray(self.basis, dtype=np.float64))
        if raw.size == 0 or raw.shape[0] == 0:
            raise DimensionError("subspace basis must contain at least one vector")
        if not np.all(np.isfinite(raw)):
            raise ValueError("subspace basis must be finite")
        ortho = scipy.linalg.orth(raw.T)
        if ortho.shape[1] != raw.shape[0]:
            raise DimensionError(
                f"basis vectors are linearly dependent (rank {ortho.shape[1]} < {raw.shape[0]})"
            )
        object.__setattr__(self, "basis", ortho.T.copy())

    @property
    def dim(self) -> int:
        return int(self.basis.shape[0])

    @property
    def ambient(self) -> int:
        return int(self.basis.shape[1])

    def projector(self) -> np.ndarray:
        return self.basis.T @ self.basis

    def project(self, values: np.ndarray) -> np.ndarray:
        """Orthogonal projection of row vectors onto the subspace."""
        return (values @ self.basis.T) @ self.basis

    def distance(self, values: np.ndarray) -> np.ndarray:
        return np.linalg.norm(values - self.project(values), axis=-1)

    @classmethod
    def span(cls, vectors: list[list[float]] | np.ndarray, label: str = "") -> SubspaceSpec:
        return cls(basis=np.asarray(vectors, dtype=np.float64), label=label)


def identity_line(d: int) -> SubspaceSpec:
    """span{I_d} inside d x d matrices (row-major)."""
    return SubspaceSpec(basis=np.eye(d).reshape(1, d * d), label=f"span(I_{d})")


def conformal_subspace() -> SubspaceSpec:
    """E_0 = {[[a, b], [-b, a]]}, the conformal 2 x 2 matrices."""
    return SubspaceSpec(
        basis=np.array([[1.0, 0.0, 0.0, 1.0], [0.0, 1.0, -1.0, 0.0]]), label="E0"
    )


def trace_free_symmetric(d: int) -> SubspaceSpec:
    """SD(d): symmetric d x d matrices with zero trace."""
    vectors = []
    for i in range(d):
        for j in range(i + 1, d):
            m = np.zeros((d, d))
            m[i, j] = m[j, i] = 1.0
            vectors.append(m.ravel())
    for i in range(d - 1):
        m = np.zeros((d, d))
        m[i, i], m[i + 1, i + 1] = 1.0, -1.0
        vectors.append(m.ravel())
    return SubspaceSpec(basis=np.array(vectors), label=f"SD({d})")


@dataclass(frozen=True, eq=False)
class ConeSpec:
    """Circular cone K_eps around a unit axis contained in a subspace L."""

    axis: np.ndarray
    epsilon: float
    subspace: SubspaceSpec = field(default=None)  # type: ignore[assignment]

    def __post_init__(self) -> None:
        axis = np.asarray(self.axis, dtype=np.float64).ravel()
        norm = float(np.linalg.norm(axis))
        if not np.isfinite(norm) or norm == 0.0:
            raise ValueError("cone axis must be a finite nonzero vector")
        axis = axis / norm
        if not 0.0 < self.epsilon < 1.0:
            raise ValueError(f"aperture eps must lie in (0, 1), got {self.epsilon}")
        subspace = self.subspace if self.subspace is not None else SubspaceSpec(axis[None, :])
        if subspace.ambient != axis.size:
            raise DimensionError(
                f"axis has {axis.size} components but L lives in R^{subspace.ambient}"
            )
        if float(subspace.distance(axis)) > 1e-10:
            raise ValueError("cone axis must lie in the subspace L")
        object.__setattr__(self, "axis", axis)
        object.__setattr__(self, "subspace", subspace)

    @property
    def slope(self) -> float:
        return 2.0 * self.epsilon

    @property
    def dim(self) -> int:
        return int(self.axis.size)

    def _split(self, values: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        values = np.atleast_2d(np.asarray(values, dtype=np.float64))
        if values.shape[-1] != self.dim:
            raise DimensionError(f"vectors must have {self.dim} components")
        t = values @ self.axis
        s = np.linalg.norm(values - t[:, None] * self.axis, axis=1)
        return t, s

    def contains(self, values: np.ndarray, tol: float = MEMBERSHIP_TOL) -> np.ndarray:
        """Membership of row vectors, with a tolerance relative to |v|."""
        t, s = self._split(values)
        scale = np.hypot(t, s)
        return (t >= -tol * scale) & (s <= self.slope * t + tol * scale)

    def distance(self, values: np.ndarray) -> np.ndarray:
        """Euclidean distance of row vectors to the cone."""
        t, s = self._split(values)
        alpha = self.slope
        inside = s <= alpha * t
        apex = t <= -alpha * s
        lateral = (s - alpha * t) / np.sqrt(1.0 + alpha**2)
        return np.where(inside, 0.0, np.where(apex, np.hypot(t, s), lateral))

    def max_subspace_distance(self) -> float:
        """sup of dist(v, L) over unit v in K_eps (attained on the boundary ray)."""
        alpha = self.slope
        return float(min(1.0, alpha / np.sqrt(1.0 + alpha**2)))
