"""Conformal coordinates of real 2 x 2 matrices.

Identifying R^2 with C, every real linear map is A v = a_plus v + a_minus conj(v).
For A = [[a, b], [c, d]]:

    a_plus  = ((a + d) + i (c - b)) / 2
    a_minus = ((a - d) + i (c + b)) / 2

The dilatation a_minus / conj(a_plus) measures the distance from the
conformal matrices E0 = {[[a, b], [-b, a]]}.
"""

from __future__ import annotations

import cmath
from typing import NamedTuple

import numpy as np

from wavecone.cones.geometry import conformal_subspace

INFINITE_DILATATION = complex(float("inf"), 0.0)


class ConformalCoords(NamedTuple):
    a_plus: complex
    a_minus: complex
    dilatation: complex

    @property
    def dilatation_is_infinite(self) -> bool:
        return cmath.isinf(self.dilatation)


def _as_matrix(A: np.ndarray | list[list[float]]) -> np.ndarray:
    matrix = np.asarray(A, dtype=np.float64)
    if matrix.shape != (2, 2):
        raise ValueError(f"expected a 2 x 2 matrix, got shape {matrix.shape}")
    if not np.all(np.isfinite(matrix)):
        raise ValueError("matrix must be finite")
    return matrix


def conformal_coords(A: np.ndarray | list[list[float]]) -> ConformalCoords:
    """(a_plus, a_minus, dilatation); a_plus = 0 gives the infinite sentinel.

    Raises:
        ValueError: If A is not a finite nonzero 2 x 2 matrix
    """
    (a, b), (c, d) = _as_matrix(A)
    if a == b == c == d == 0.0:
        raise ValueError("the zero matrix has no conformal decomposition")
    a_plus = complex(a + d, c - b) / 2.0
    a_minus = complex(a - d, c + b) / 2.0
    if a_plus == 0:
        return ConformalCoords(a_plus, a_minus, INFINITE_DILATATION)
    return ConformalCoords(a_plus, a_minus, a_minus / a_plus.conjugate())


def reconstruct(a_plus: complex, a_minus: complex) -> np.ndarray:
    """The real matrix of v -> a_plus v + a_minus conj(v)."""
    first = a_plus + a_minus
    second = 1j * (a_plus - a_minus)
    return np.array([[first.real, second.real], [first.imag, second.imag]])


def distance_to_conformal(A: np.ndarray | list[list[float]]) -> float:
    """dist(A / |A|, E0) in the Frobenius norm; equals |mu| / sqrt(1 + |mu|^2)."""
    matrix = _as_matrix(A)
    norm = float(np.linalg.norm(matrix))
    if norm == 0.0:
        raise ValueError("the zero matrix has no direction")
    return float(conformal_subspace().distance((matrix / norm).reshape(1, 4))[0])


def dilatation_bound(mu: complex) -> float:
    """|mu| / sqrt(1 + |mu|^2), with 1 for the infinite sentinel."""
    if cmath.isinf(mu):
        return 1.0
    size = abs(mu)
    return size / float(np.sqrt(1.0 + size**2))
