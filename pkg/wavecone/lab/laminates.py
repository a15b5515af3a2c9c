"""Simple laminates u_j = B0 + delta P phi(j x.xi) with P in ker A(xi).

phi is the 1-periodic indicator of [0, 1/2), sampled with the phase shifted by
half a cell so no grid point sits on a jump. Every frequency of u_j is an
integer multiple of xi, so A u_j = 0 exactly; u_j converges weakly to the
midpoint B0 + delta P / 2 but stays at L^1 distance delta |P| / 2 from it.
"""

from __future__ import annotations

import logging
from typing import NamedTuple

import numpy as np

from wavecone.errors import DimensionError, KernelMembershipError, ResolutionError
from wavecone.operators.multiindex import MultiIndex, multi_indices
from wavecone.operators.spec import OperatorSpec
from wavecone.operators.symbol import full_symbol_batch, reduced_symbol_batch
from wavecone.spectral.grid import TorusField, TorusGrid

logger = logging.getLogger(__name__)

KERNEL_TOL = 1e-10
TEST_DEGREE = 3


def pairing_monomials(d: int, degree: int = TEST_DEGREE) -> list[MultiIndex]:
    """x^alpha for all |alpha| <= degree, in graded order."""
    return [alpha for k in range(degree + 1) for alpha in multi_indices(d, k)]


def monomial_pairings(
    field: TorusField, degree: int = TEST_DEGREE, mask: np.ndarray | None = None
) -> np.ndarray:
    """int f x^alpha dx (rectangle rule) for every test monomial, shape (n_alpha, dim)."""
    grid = field.grid
    points = grid.points
    weights = np.ones(grid.size) if mask is None else mask.ravel().astype(np.float64)
    rows = []
    for alpha in pairing_monomials(grid.d, degree):
        test = alpha.monomial(points) * weights
        rows.append(field.flat @ test * grid.cell_volume)
    return np.real_if_close(np.array(rows))


def square_wave(grid: TorusGrid, xi: np.ndarray, j: int) -> np.ndarray:
    """phi(j x.xi) with the sampling phase shifted by 1 / (2n)."""
    phase = j * np.tensordot(xi.astype(np.float64), grid.coordinates, axes=1) + 0.5 * grid.h
    return (np.mod(phase, 1.0) < 0.5).astype(np.float64)


def check_kernel_member(op: OperatorSpec, xi: np.ndarray, P: np.ndarray, tol: float) -> float:
    """|A(xi) P| / (|A(xi)| |P|) at the unit direction of xi."""
    unit = xi / np.linalg.norm(xi)
    symbol = reduced_symbol_batch(op, unit[None, :])[0]
    scale = float(np.linalg.norm(symbol, ord=2) * np.linalg.norm(P))
    residual = float(np.linalg.norm(symbol @ P))
    relative = residual / scale if scale > 0 else residual
    if relative > tol:
        raise KernelMembershipError(
            f"P is not in ker A(xi) for xi={xi.tolist()}: "
            f"relative residual {relative:.3e} > {tol:g}"
        )
    return relative


class LaminateResult(NamedTuple):
    field: TorusField
    j: int
    a_free_residual: float
    pairing_error: float
    l1_distance: float
    expected_l1: float


def a_free_residual(op: OperatorSpec, field: TorusField) -> float:
    """max over lattice frequencies of |A(zeta) u^(zeta)| relative to max |u^(zeta)|."""
    spectrum = field.spectrum().reshape(field.dim, -1).T
    symbols = full_symbol_batch(op, field.grid.lattice)
    image = np.einsum("nwv,nv->nw", symbols, spectrum)
    scale = float(np.max(np.linalg.norm(spectrum, axis=1)))
    peak = float(np.max(np.linalg.norm(image, axis=1)))
    return peak / scale if scale > 0 else peak


def laminate(
    op: OperatorSpec,
    xi: np.ndarray | list[int],
    P: np.ndarray | list[float],
    B0: np.ndarray | list[float],
    delta: float,
    j: int,
    grid: TorusGrid,
    tol: float = KERNEL_TOL,
) -> LaminateResult:
    """Sample u_j and report its A-freeness, weak-pairing and L^1 diagnostics.

    xi must be a nonzero integer vector; the grid must carry whole periods of
    the laminate (n divisible by 2j) below Nyquist (j |xi|_inf <= n / 2).

    Raises:
        KernelMembershipError: If P is not in ker A(xi)
        ResolutionError: If the grid cannot represent the oscillation
    """
    xi_arr = np.asarray(xi)
    if xi_arr.shape != (op.d,) or not np.all(xi_arr == np.round(xi_arr)) or not np.any(xi_arr):
        raise DimensionError(f"xi must be a nonzero integer vector of length {op.d}")
    xi_arr = xi_arr.astype(int)
    P_arr = np.asarray(P, dtype=np.float64).ravel()
    B_arr = np.asarray(B0, dtype=np.float64).ravel()
    if P_arr.size != op.dim_v or B_arr.size != op.dim_v:
        raise DimensionError(f"P and B0 must have dimV = {op.dim_v} entries")
    if grid.d != op.d:
        raise DimensionError(f"grid lives in d={grid.d}, operator in d={op.d}")
    if j < 1 or grid.n % (2 * j) or j * int(np.abs(xi_arr).max()) > grid.n // 2:
        raise ResolutionError(f"n={grid.n} cannot carry the laminate j={j}, xi={xi_arr.tolist()}")
    check_kernel_member(op, xi_arr.astype(np.float64), P_arr, tol)

    phi = square_wave(grid, xi_arr, j)
    shape = (-1, *([1] * grid.d))
    values = B_arr.reshape(shape) + delta * P_arr.reshape(shape) * phi[None, ...]
    field = TorusField(grid=grid, values=values)
    midpoint = TorusField.constant(grid, B_arr + 0.5 * delta * P_arr)

    residual = a_free_residual(op, field)
    pairing_error = float(
        np.max(np.linalg.norm(monomial_pairings(field) - monomial_pairings(midpoint), axis=1))
    )
    l1 = float(np.sum((field - midpoint).pointwise_norm()) * grid.cell_volume)
    logger.debug("laminate j=%d: residual %.2e, pairing error %.3e", j, residual, pairing_error)
    return LaminateResult(
        field=field,
        j=j,
        a_free_residual=residual,
        pairing_error=pairing_error,
        l1_distance=l1,
        expected_l1=0.5 * abs(delta) * float(np.linalg.norm(P_arr)),
    )


def laminate_sequence(
    op: OperatorSpec,
    xi: np.ndarray | list[int],
    P: np.ndarray | list[float],
    B0: np.ndarray | list[float],
    delta: float,
    js: list[int] | tuple[int, ...],
    grid: TorusGrid,
    tol: float = KERNEL_TOL,
) -> list[LaminateResult]:
    return [laminate(op, xi, P, B0, delta, j, grid, tol) for j in js]


def pairing_decay_rate(results: list[LaminateResult]) -> float:
    """Negative log-log slope of pairing error against j (1 means O(1/j))."""
    if len(results) < 2:
        raise ValueError("a decay rate needs at least two laminates")
    js = np.log([r.j for r in results])
    errors = np.log([r.pairing_error for r in results])
    slope = np.polyfit(js, errors, 1)[0]
    return float(-slope)
