"""Annihilators of elliptic operators and iterated Laplacians.

For an elliptic B: U -> W the adjugate construction

    A(xi) = det[B^T B] id_W - B adj[B^T B] B^T

is a polynomial symbol of degree 2k dim U with A(xi) B(xi) = 0 and
ker A(xi) = im B(xi) for xi != 0.
"""

from __future__ import annotations

import logging
from typing import NamedTuple

import numpy as np
import scipy.linalg

from wavecone.cones.linalg import DEFAULT_RANK_TOL, image_basis, kernel_basis, rank_batch
from wavecone.cones.sphere import random_unit_vectors, sphere_sample
from wavecone.errors import DimensionError, NotEllipticError, SymbolicBudgetError
from wavecone.operators.spec import OperatorSpec
from wavecone.operators.symbol import compose
from wavecone.symbolic.polymatrix import (
    PolyMatrix,
    laplacian_symbol,
    poly_adjugate,
    poly_det,
    polymatrix_to_operator,
    symbol_polymatrix,
)

logger = logging.getLogger(__name__)

MAX_DOMAIN_DIM = 4
MAX_ANNIHILATOR_DEGREE = 24
MAX_ITERATED_DEGREE = 48
DEFAULT_ANGLE_TOL = 1e-8


class Annihilator(NamedTuple):
    op_a: OperatorSpec
    symbol_a: PolyMatrix
    symbol_b: PolyMatrix
    order: int


class AnnihilatorCheck(NamedTuple):
    """Exactness of a candidate annihilator A for B."""

    symbolic_zero: bool
    max_angle: float
    dim_mismatches: int
    frequencies: int
    is_exact: bool


def check_elliptic(
    op: OperatorSpec, sample_size: int = 64, seed: int = 0, rank_tol: float = DEFAULT_RANK_TOL
) -> None:
    """Raise NotEllipticError if ker B(xi) is nontrivial at a sampled unit frequency."""
    sample = sphere_sample(op.d, max(sample_size, 2 * op.d), seed)
    ranks = rank_batch(op, sample.points, rank_tol)
    deficient = np.flatnonzero(ranks < op.dim_v)
    if deficient.size:
        xi = sample.points[deficient[0]]
        raise NotEllipticError(
            f"{op.label()} has a nontrivial symbol kernel at xi={np.round(xi, 6).tolist()} "
            f"(rank {int(ranks[deficient[0]])} < dimV={op.dim_v})"
        )


def annihilator(op_b: OperatorSpec, sample_size: int = 64, seed: int = 0) -> Annihilator:
    """Build the adjugate annihilator of an elliptic operator.

    Args:
        op_b: Elliptic operator B of order k from U = R^dimV to W = R^dimW
        sample_size: Sphere points used for the ellipticity check
        seed: Seed of the ellipticity sample

    Returns:
        Annihilator with op_a of order 2k dimV, op_a o op_b = 0 exactly

    Raises:
        SymbolicBudgetError: If dim U > 4 or the order exceeds 24
        NotEllipticError: If B is not elliptic on the sample
    """
    order = 2 * op_b.k * op_b.dim_v
    if op_b.dim_v > MAX_DOMAIN_DIM:
        raise SymbolicBudgetError(
            f"dim U = {op_b.dim_v} exceeds {MAX_DOMAIN_DIM}: the adjugate of B^T B would need "
            f"{op_b.dim_v ** 2} determinants of size {op_b.dim_v - 1}"
        )
    if order > MAX_ANNIHILATOR_DEGREE:
        raise SymbolicBudgetError(
            f"annihilator order 2k dimU = {order} exceeds the degree budget {MAX_ANNIHILATOR_DEGREE}"
        )
    check_elliptic(op_b, sample_size, seed)

    b = symbol_polymatrix(op_b)
    gram = laplacian_symbol(op_b)
    det = poly_det(gram)
    adj = poly_adjugate(gram)
    symbol_a = PolyMatrix.identity(op_b.dim_w, b.gens).scale(det) - b @ adj @ b.transpose()
    if not (symbol_a @ b).is_zero():
        raise ArithmeticError("adjugate identity failed: A(xi) B(xi) is not the zero polynomial")
    name = f"annihilator({op_b.name})" if op_b.name else ""
    op_a = polymatrix_to_operator(symbol_a, name=name)
    logger.debug("annihilator of %s has order %d", op_b.label(), op_a.k)
    return Annihilator(op_a=op_a, symbol_a=symbol_a, symbol_b=b, order=order)


def verify_annihilator(
    op_a: OperatorSpec,
    op_b: OperatorSpec,
    frequencies: np.ndarray | None = None,
    angle_tol: float = DEFAULT_ANGLE_TOL,
    rank_tol: float = DEFAULT_RANK_TOL,
    seed: int = 0,
) -> AnnihilatorCheck:
    """Check A o B = 0 exactly and im B(xi) = ker A(xi) at sampled frequencies.

    Works for any candidate pair, including non-elliptic constant-rank B, where
    only the sampled part of the check is meaningful beyond the zero test.
    """
    if op_a.d != op_b.d or op_a.dim_v != op_b.dim_w:
        raise DimensionError("A must act on the target space of B in the same dimension")
    symbolic_zero = compose(op_a, op_b).is_zero
    xis = random_unit_vectors(op_b.d, 100, seed) if frequencies is None else np.atleast_2d(frequencies)
    worst, mismatches = 0.0, 0
    for xi in xis:
        im_b = image_basis(op_b, xi, rank_tol)
        ker_a = kernel_basis(op_a, xi, rank_tol)
        if im_b.shape[1] != ker_a.shape[1]:
            mismatches += 1
            continue
        if im_b.shape[1] == 0:
            continue
        worst = max(worst, float(np.max(scipy.linalg.subspace_angles(im_b, ker_a))))
    return AnnihilatorCheck(
        symbolic_zero=symbolic_zero,
        max_angle=worst,
        dim_mismatches=mismatches,
        frequencies=len(xis),
        is_exact=symbolic_zero and mismatches == 0 and worst <= angle_tol,
    )


def minimal_iteration_order(k: int, d: int) -> int:
    """Smallest r >= 1 with 2^r k > d."""
    if k < 1 or d < 1:
        raise ValueError("k and d must be positive")
    r = 1
    while 2**r * k <= d:
        r += 1
    return r


def iterated_laplacian(op_a: OperatorSpec, r: int) -> PolyMatrix:
    """[A^T A]^(2^(r-1)), homogeneous of degree 2^r k.

    Raises:
        ValueError: If r < 1
        SymbolicBudgetError: If the degree exceeds MAX_ITERATED_DEGREE
    """
    if r < 1:
        raise ValueError(f"r must be >= 1, got {r}")
    degree = 2**r * op_a.k
    if degree > MAX_ITERATED_DEGREE:
        raise SymbolicBudgetError(
            f"iterated Laplacian of degree {degree} exceeds the budget {MAX_ITERATED_DEGREE}"
        )
    power = laplacian_symbol(op_a)
    for _ in range(r - 1):
        power = power @ power
    return power


def polymatrix_kernel(M: PolyMatrix, xi: np.ndarray, rank_tol: float = DEFAULT_RANK_TOL) -> np.ndarray:
    """Orthonormal kernel basis of M(xi / |xi|) as columns."""
    xi = np.asarray(xi, dtype=np.float64)
    value = M.evaluate(xi / np.linalg.norm(xi))[0]
    return scipy.linalg.null_space(value, rcond=rank_tol)
