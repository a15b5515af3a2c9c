"""SVD-based kernels, images, pseudoinverses and projections of symbols.

Singular values below rank_tol * sigma_max count as zero. Single-frequency
routines use scipy.linalg; the batched variants feed the spectral engine.
"""

from __future__ import annotations

import numpy as np
import scipy.linalg

from wavecone.errors import DimensionError, PreconditionError
from wavecone.operators.spec import OperatorSpec
from wavecone.operators.symbol import full_symbol_batch, reduced_symbol_batch

DEFAULT_RANK_TOL = 1e-10


def _nonzero_frequency(op: OperatorSpec, xi: np.ndarray | list[float]) -> np.ndarray:
    freq = np.asarray(xi, dtype=np.float64)
    if freq.shape != (op.d,):
        raise DimensionError(f"frequency must have {op.d} components, got shape {freq.shape}")
    norm = float(np.linalg.norm(freq))
    if norm == 0.0:
        raise PreconditionError("symbol kernels and inverses are undefined at xi = 0")
    return freq


def unit_reduced_symbol(op: OperatorSpec, xi: np.ndarray | list[float]) -> np.ndarray:
    """Reduced symbol at xi/|xi|."""
    freq = _nonzero_frequency(op, xi)
    return reduced_symbol_batch(op, freq / np.linalg.norm(freq))[0]


def kernel_basis(
    op: OperatorSpec, xi: np.ndarray | list[float], rank_tol: float = DEFAULT_RANK_TOL
) -> np.ndarray:
    """Orthonormal basis of ker A(xi) as columns, shape (dimV, dim ker).

    Raises:
        PreconditionError: If xi = 0
    """
    return scipy.linalg.null_space(unit_reduced_symbol(op, xi), rcond=rank_tol)


def image_basis(
    op: OperatorSpec, xi: np.ndarray | list[float], rank_tol: float = DEFAULT_RANK_TOL
) -> np.ndarray:
    """Orthonormal basis of im A(xi) as columns, shape (dimW, rank)."""
    return scipy.linalg.orth(unit_reduced_symbol(op, xi), rcond=rank_tol)


def symbol_rank(op: OperatorSpec, xi: np.ndarray | list[float], rank_tol: float = DEFAULT_RANK_TOL) -> int:
    return int(image_basis(op, xi, rank_tol).shape[1])


def pseudoinverse_symbol(
    op: OperatorSpec, xi: np.ndarray | list[float], rank_tol: float = DEFAULT_RANK_TOL
) -> np.ndarray:
    """Moore-Penrose inverse of the full symbol, shape (dimV, dimW)."""
    freq = _nonzero_frequency(op, xi)
    full = full_symbol_batch(op, freq)[0]
    return scipy.linalg.pinv(full, rtol=rank_tol)


def projection_symbol(
    op: OperatorSpec, xi: np.ndarray | list[float], rank_tol: float = DEFAULT_RANK_TOL
) -> np.ndarray:
    """pi(xi) = A(xi)^+ A(xi): orthogonal projection of V onto (ker A(xi))^perp."""
    reduced = unit_reduced_symbol(op, xi)
    return scipy.linalg.pinv(reduced, rtol=rank_tol) @ reduced


def intersect_subspaces(basis: np.ndarray, other: np.ndarray, tol: float) -> np.ndarray:
    """Intersection of two column-orthonormal subspaces, as orthonormal columns.

    Keeps the directions of span(basis) whose residual after projecting onto
    span(other) is at most tol.
    """
    ambient, r = basis.shape
    if r == 0:
        return basis
    if other.shape[1] == 0:
        return np.zeros((ambient, 0))
    residual = basis - other @ (other.T @ basis)
    _, s, vh = np.linalg.svd(residual, full_matrices=True)
    singular = np.zeros(r)
    singular[: s.size] = s
    keep = vh[singular <= tol]
    if keep.shape[0] == 0:
        return np.zeros((ambient, 0))
    q, _ = np.linalg.qr(basis @ keep.T)
    return q


# Batched variants over frequency arrays of shape (N, d).


def _relative_mask(s: np.ndarray, rank_tol: float) -> np.ndarray:
    top = s[:, :1]
    return (s > rank_tol * top) & (top > 0)


def rank_batch(op: OperatorSpec, xis: np.ndarray, rank_tol: float = DEFAULT_RANK_TOL) -> np.ndarray:
    s = np.linalg.svd(reduced_symbol_batch(op, xis), compute_uv=False)
    return _relative_mask(s, rank_tol).sum(axis=1)


def projection_batch(
    op: OperatorSpec, xis: np.ndarray, rank_tol: float = DEFAULT_RANK_TOL
) -> np.ndarray:
    """pi at each frequency, shape (N, dimV, dimV); zero rows of xis give the zero matrix."""
    _, s, vh = np.linalg.svd(reduced_symbol_batch(op, xis), full_matrices=False)
    mask = _relative_mask(s, rank_tol).astype(np.float64)
    return np.einsum("nri,nr,nrj->nij", vh, mask, vh)


def pseudoinverse_batch(
    op: OperatorSpec, xis: np.ndarray, rank_tol: float = DEFAULT_RANK_TOL
) -> np.ndarray:
    """Moore-Penrose inverses of the full symbols, shape (N, dimV, dimW)."""
    full = full_symbol_batch(op, xis)
    u, s, vh = np.linalg.svd(full, full_matrices=False)
    mask = _relative_mask(s, rank_tol)
    inv = np.where(mask, 1.0 / np.where(mask, s, 1.0), 0.0)
    return np.einsum("nri,nr,njr->nij", vh.conj(), inv, u.conj())
