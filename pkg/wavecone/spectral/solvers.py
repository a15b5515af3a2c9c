"""Generalized Laplacian solves and their Neumann-series perturbation.

(Id + Delta_B) u = f is inverted mode by mode with the matrices
id + B(zeta)* B(zeta), which are symmetric positive definite. The perturbed
system (Id + Delta_B - R) u = f is solved by the fixed-point iteration
u <- (Id + Delta_B)^{-1}(f + R u), which converges when R is small relative
to Delta_B.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from math import factorial
from typing import NamedTuple

import numpy as np

from wavecone.errors import DimensionError, PerturbationDivergedError
from wavecone.operators.multiindex import MultiIndex, multi_indices
from wavecone.operators.spec import OperatorSpec
from wavecone.operators.symbol import reduced_symbol_batch
from wavecone.spectral.grid import TorusField, TorusGrid
from wavecone.spectral.multipliers import MultiplierFn, ZeroModePolicy, apply_multiplier
from wavecone.spectral.norms import bessel_norm, lq_norm

logger = logging.getLogger(__name__)

DEFAULT_TOL = 1e-12
DEFAULT_MAX_ITER = 500
ROUNDOFF = 1e-14


def laplacian_matrices(op_b: OperatorSpec, grid: TorusGrid) -> np.ndarray:
    """id + B(zeta)* B(zeta) on the lattice, shape (n^d, dimV, dimV), real."""
    reduced = reduced_symbol_batch(op_b, grid.lattice)
    gram = np.einsum("nwi,nwj->nij", reduced, reduced)
    return np.eye(op_b.dim_v)[None, :, :] + (2.0 * np.pi) ** (2 * op_b.k) * gram


def _check_field(op_b: OperatorSpec, f: TorusField) -> None:
    if f.dim != op_b.dim_v:
        raise DimensionError(f"field has dim {f.dim}, operator acts on dimV={op_b.dim_v}")
    if f.grid.d != op_b.d:
        raise DimensionError(f"field lives in d={f.grid.d}, operator in d={op_b.d}")


def solve_laplace(op_b: OperatorSpec, f: TorusField) -> TorusField:
    """u = F^{-1}[(id + B* B)^{-1} f^], the unique solution of (Id + Delta_B) u = f."""
    _check_field(op_b, f)
    spectrum = f.spectrum().reshape(f.dim, -1).T
    solved = np.linalg.solve(laplacian_matrices(op_b, f.grid), spectrum[..., None])[..., 0]
    return TorusField.from_spectrum(f.grid, solved.T.reshape(f.dim, *f.grid.shape), real=f.real)


def laplace_multiplier(op_b: OperatorSpec) -> MultiplierFn:
    """id + B* B as a multiplier (the forward operator of solve_laplace)."""

    def evaluate(z: np.ndarray) -> np.ndarray:
        reduced = reduced_symbol_batch(op_b, z)
        gram = np.einsum("nwi,nwj->nij", reduced, reduced)
        return np.eye(op_b.dim_v)[None] + (2.0 * np.pi) ** (2 * op_b.k) * gram

    return MultiplierFn(
        evaluator=evaluate, dim_in=op_b.dim_v, dim_out=op_b.dim_v, label=f"Id+Delta[{op_b.label()}]"
    )


def laplace_residual(op_b: OperatorSpec, u: TorusField, f: TorusField) -> float:
    """|(Id + Delta_B) u - f|_2 / |f|_2 (absolute when f = 0)."""
    residual = lq_norm(apply_multiplier(u, laplace_multiplier(op_b)) - f, 2.0)
    scale = lq_norm(f, 2.0)
    return residual / scale if scale > 0 else residual


def derivative_multiplier(alpha: MultiIndex, dim: int) -> MultiplierFn:
    """(2 pi i zeta)^alpha id_dim."""
    factor = (2j * np.pi) ** alpha.modulus

    def evaluate(z: np.ndarray) -> np.ndarray:
        return (factor * alpha.monomial(z))[:, None, None] * np.eye(dim)[None]

    zero_mode = ZeroModePolicy.ZERO if alpha.modulus else ZeroModePolicy.IDENTITY
    return MultiplierFn(evaluator=evaluate, dim_in=dim, dim_out=dim, zero_mode=zero_mode)


@dataclass(frozen=True, eq=False)
class Perturbation:
    """R u = sum_alpha R_alpha(x) d^alpha u with matrix coefficients sampled on a grid.

    Each coefficient has shape (dim, dim, *grid.shape).
    """

    grid: TorusGrid
    dim: int
    order: int
    coeffs: dict[MultiIndex, np.ndarray]

    def __post_init__(self) -> None:
        expected = (self.dim, self.dim, *self.grid.shape)
        for alpha, value in self.coeffs.items():
            if alpha.d != self.grid.d or alpha.modulus != self.order:
                raise DimensionError(f"coefficient {alpha} is not of order {self.order}")
            if value.shape != expected:
                raise DimensionError(f"coefficient at {alpha} has shape {value.shape}, expected {expected}")
            if not np.all(np.isfinite(value)):
                raise ValueError(f"coefficient at {alpha} is not finite")

    @property
    def is_zero(self) -> bool:
        return all(not np.any(v) for v in self.coeffs.values())

    def sup_norm(self) -> float:
        """max over alpha and x of the spectral norm of R_alpha(x)."""
        if not self.coeffs:
            return 0.0
        return max(
            float(np.linalg.norm(np.moveaxis(v, (0, 1), (-2, -1)), ord=2, axis=(-2, -1)).max())
            for v in self.coeffs.values()
        )

    def scaled(self, c: float) -> Perturbation:
        return Perturbation(
            grid=self.grid,
            dim=self.dim,
            order=self.order,
            coeffs={alpha: c * v for alpha, v in self.coeffs.items()},
        )

    def apply(self, u: TorusField) -> TorusField:
        if u.dim != self.dim or u.grid != self.grid:
            raise DimensionError("perturbation and field do not match")
        out = np.zeros_like(u.values)
        for alpha, coeff in self.coeffs.items():
            derivative = apply_multiplier(u, derivative_multiplier(alpha, self.dim))
            out = out + np.einsum("ij...,j...->i...", coeff, derivative.values)
        return TorusField(grid=self.grid, values=out)

    @classmethod
    def zero(cls, grid: TorusGrid, dim: int, order: int) -> Perturbation:
        return cls(grid=grid, dim=dim, order=order, coeffs={})

    @classmethod
    def constant(
        cls, grid: TorusGrid, dim: int, order: int, matrices: dict[MultiIndex, np.ndarray]
    ) -> Perturbation:
        """Constant-in-x coefficients broadcast over the grid."""
        coeffs = {
            alpha: np.broadcast_to(
                np.asarray(m, dtype=np.float64).reshape(dim, dim, *([1] * grid.d)),
                (dim, dim, *grid.shape),
            ).copy()
            for alpha, m in matrices.items()
        }
        return cls(grid=grid, dim=dim, order=order, coeffs=coeffs)

    @classmethod
    def polyharmonic(cls, grid: TorusGrid, dim: int, k: int, delta: float = 1.0) -> Perturbation:
        """delta * Delta^k id_dim, written as sum_{|beta| = k} k!/beta! d^(2 beta)."""
        matrices = {}
        for beta in multi_indices(grid.d, k):
            weight = factorial(k)
            for b in beta.entries:
                weight //= factorial(b)
            matrices[beta + beta] = delta * weight * np.eye(dim)
        return cls.constant(grid, dim, 2 * k, matrices)


class PerturbedSolution(NamedTuple):
    u: TorusField
    iterations: int
    residual: float
    contraction: float
    converged: bool
    sup_norm: float


def perturbed_residual(
    op_b: OperatorSpec, perturbation: Perturbation, u: TorusField, f: TorusField
) -> float:
    """|(Id + Delta_B - R) u - f|_2 / |f|_2."""
    forward = apply_multiplier(u, laplace_multiplier(op_b)) - perturbation.apply(u)
    scale = lq_norm(f, 2.0)
    residual = lq_norm(forward - f, 2.0)
    return residual / scale if scale > 0 else residual


def solve_perturbed(
    op_b: OperatorSpec,
    perturbation: Perturbation,
    f: TorusField,
    tol: float = DEFAULT_TOL,
    max_iter: int = DEFAULT_MAX_ITER,
) -> PerturbedSolution:
    """Fixed-point iteration u_{n+1} = solve_laplace(B, f + R u_n), u_0 = solve_laplace(B, f).

    Stops when the relative H^{2k} difference of successive iterates is at most
    tol. ``contraction`` is the last ratio of successive differences measured
    above roundoff, counting u_0 - 0 as the first difference.

    Raises:
        DimensionError: If the perturbation order is not 2k or fields do not match
        PerturbationDivergedError: If an iterate's L^2 norm doubles the first one
    """
    _check_field(op_b, f)
    if perturbation.order != 2 * op_b.k:
        raise DimensionError(
            f"perturbation has order {perturbation.order}, expected 2k = {2 * op_b.k}"
        )
    sup = perturbation.sup_norm()
    s = 2.0 * op_b.k
    u = solve_laplace(op_b, f)
    if perturbation.is_zero:
        return PerturbedSolution(
            u=u,
            iterations=1,
            residual=laplace_residual(op_b, u, f),
            contraction=0.0,
            converged=True,
            sup_norm=sup,
        )
    base = lq_norm(u, 2.0)
    contraction = 0.0
    previous_diff = bessel_norm(u, s, 2.0)
    converged = False
    iterations = 1
    while iterations < max_iter:
        u_next = solve_laplace(op_b, f + perturbation.apply(u))
        iterations += 1
        diff = bessel_norm(u_next - u, s, 2.0)
        size = bessel_norm(u_next, s, 2.0)
        if previous_diff > ROUNDOFF * max(size, 1.0):
            contraction = diff / previous_diff
        previous_diff = diff
        u = u_next
        if base > 0 and lq_norm(u, 2.0) > 2.0 * base:
            raise PerturbationDivergedError(
                f"perturbed iteration diverged after {iterations} solves "
                f"(contraction estimate {contraction:.3g}, sup |R| = {sup:.3g}); "
                "the perturbation is too large relative to Delta_B",
                contraction=contraction,
                iterations=iterations,
            )
        if diff <= tol * max(size, ROUNDOFF):
            converged = True
            break
    if not converged:
        logger.warning(
            "perturbed solve stopped at max_iter=%d without converging (contraction %.3g)",
            max_iter,
            contraction,
        )
    return PerturbedSolution(
        u=u,
        iterations=iterations,
        residual=perturbed_residual(op_b, perturbation, u, f),
        contraction=contraction,
        converged=converged,
        sup_norm=sup,
    )


class ContractionRow(NamedTuple):
    delta: float
    contraction: float
    iterations: int
    converged: bool
    diverged: bool


def contraction_sweep(
    op_b: OperatorSpec,
    f: TorusField,
    deltas: tuple[float, ...] = (0.1, 0.3, 0.9, 2.0, 4.0),
    shape: Perturbation | None = None,
    tol: float = DEFAULT_TOL,
    max_iter: int = 200,
) -> list[ContractionRow]:
    """Run solve_perturbed with R = delta * shape for each delta (default shape Delta^k)."""
    shape = shape or Perturbation.polyharmonic(f.grid, op_b.dim_v, op_b.k)
    rows = []
    for delta in deltas:
        try:
            result = solve_perturbed(op_b, shape.scaled(delta), f, tol=tol, max_iter=max_iter)
            rows.append(
                ContractionRow(delta, result.contraction, result.iterations, result.converged, False)
            )
        except PerturbationDivergedError as e:
            rows.append(ContractionRow(delta, e.contraction, e.iterations, False, True))
        logger.debug("delta=%s -> contraction %.4f", delta, rows[-1].contraction)
    return rows
