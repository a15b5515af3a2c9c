"""Fourier multipliers on the torus: T f = F^{-1}[m(zeta) f^(zeta)].

Full symbols use 2 pi i zeta on the integer lattice. Matrix-valued
multipliers act per frequency; the zero mode is resolved by an explicit policy
since homogeneous multipliers are singular there.
"""

from __future__ import annotations

import logging
from collections.abc import Callable
from dataclasses import dataclass, field
from enum import Enum

import numpy as np

from wavecone.cones.linalg import DEFAULT_RANK_TOL, projection_batch
from wavecone.errors import DimensionError, MultiplierError
from wavecone.operators.spec import OperatorSpec
from wavecone.operators.symbol import full_symbol_batch
from wavecone.spectral.grid import TorusField, TorusGrid

logger = logging.getLogger(__name__)

Evaluator = Callable[[np.ndarray], np.ndarray]


class ZeroModePolicy(str, Enum):
    """What the multiplier does at zeta = 0."""

    IDENTITY = "identity"
    ZERO = "zero"
    CUSTOM = "custom"


@dataclass(frozen=True, eq=False)
class MultiplierFn:
    """Matrix multiplier m(zeta) of shape (dim_out, dim_in).

    ``evaluator`` receives the nonzero lattice frequencies as an (M, d) float
    array and returns (M, dim_out, dim_in) values. ``hermitian`` declares
    m(-zeta) = conj(m(zeta)), so real fields stay real.
    """

    evaluator: Evaluator
    dim_in: int
    dim_out: int
    zero_mode: ZeroModePolicy = ZeroModePolicy.IDENTITY
    zero_matrix: np.ndarray | None = None
    hermitian: bool = True
    label: str = field(default="")

    def __post_init__(self) -> None:
        if self.zero_mode is ZeroModePolicy.IDENTITY and self.dim_in != self.dim_out:
            raise DimensionError("identity zero-mode policy needs a square multiplier")
        if self.zero_mode is ZeroModePolicy.CUSTOM:
            if self.zero_matrix is None:
                raise ValueError("custom zero-mode policy needs zero_matrix")
            matrix = np.asarray(self.zero_matrix, dtype=np.complex128)
            if matrix.shape != (self.dim_out, self.dim_in):
                raise DimensionError(
                    f"zero_matrix must be {self.dim_out}x{self.dim_in}, got {matrix.shape}"
                )
            object.__setattr__(self, "zero_matrix", matrix)

    def _zero_value(self) -> np.ndarray:
        if self.zero_mode is ZeroModePolicy.IDENTITY:
            return np.eye(self.dim_in, dtype=np.complex128)
        if self.zero_mode is ZeroModePolicy.ZERO:
            return np.zeros((self.dim_out, self.dim_in), dtype=np.complex128)
        assert self.zero_matrix is not None
        return self.zero_matrix

    def matrices(self, grid: TorusGrid) -> np.ndarray:
        """Multiplier at every lattice frequency, shape (n^d, dim_out, dim_in).

        Raises:
            MultiplierError: If a value at a nonzero frequency is not finite
        """
        lattice = grid.lattice
        out = np.empty((lattice.shape[0], self.dim_out, self.dim_in), dtype=np.complex128)
        out[0] = self._zero_value()
        values = np.asarray(self.evaluator(lattice[1:]), dtype=np.complex128)
        if values.shape != (lattice.shape[0] - 1, self.dim_out, self.dim_in):
            raise DimensionError(
                f"multiplier {self.label or '<anonymous>'} returned shape {values.shape}"
            )
        bad = ~np.all(np.isfinite(values), axis=(1, 2))
        if np.any(bad):
            zeta = lattice[1:][np.argmax(bad)]
            raise MultiplierError(
                f"multiplier {self.label or '<anonymous>'} is not finite at zeta={zeta.tolist()}"
            )
        out[1:] = values
        return out

    def then(self, other: MultiplierFn) -> MultiplierFn:
        """Composite multiplier other(zeta) @ self(zeta): apply self first."""
        if other.dim_in != self.dim_out:
            raise DimensionError("multiplier dimensions do not chain")
        zero = other._zero_value() @ self._zero_value()
        return MultiplierFn(
            evaluator=lambda z: other.evaluator(z) @ self.evaluator(z),
            dim_in=self.dim_in,
            dim_out=other.dim_out,
            zero_mode=ZeroModePolicy.CUSTOM,
            zero_matrix=zero,
            hermitian=self.hermitian and other.hermitian,
            label=f"{other.label}.{self.label}",
        )


def apply_multiplier(f: TorusField, m: MultiplierFn) -> TorusField:
    """FFT, per-frequency matrix product, inverse FFT.

    Raises:
        DimensionError: If f.dim != m.dim_in
        MultiplierError: If m is not finite at a lattice frequency
    """
    if f.dim != m.dim_in:
        raise DimensionError(f"field has dim {f.dim}, multiplier expects {m.dim_in}")
    grid = f.grid
    spectrum = f.spectrum().reshape(f.dim, -1)
    out = np.einsum("nij,jn->in", m.matrices(grid), spectrum)
    return TorusField.from_spectrum(
        grid, out.reshape(m.dim_out, *grid.shape), real=f.real and m.hermitian
    )


def identity_multiplier(dim: int) -> MultiplierFn:
    def evaluate(z: np.ndarray) -> np.ndarray:
        return np.broadcast_to(np.eye(dim), (z.shape[0], dim, dim))

    return MultiplierFn(evaluator=evaluate, dim_in=dim, dim_out=dim, label="id")


def scalar_multiplier(
    fn: Callable[[np.ndarray], np.ndarray],
    dim: int,
    zero_mode: ZeroModePolicy = ZeroModePolicy.IDENTITY,
    label: str = "",
) -> MultiplierFn:
    """fn(zeta) * id_dim for a scalar function of the (M, d) frequencies."""

    def evaluate(z: np.ndarray) -> np.ndarray:
        return fn(z)[:, None, None] * np.eye(dim)[None, :, :]

    return MultiplierFn(evaluator=evaluate, dim_in=dim, dim_out=dim, zero_mode=zero_mode, label=label)


def symbol_multiplier(op: OperatorSpec) -> MultiplierFn:
    """Full symbol (2 pi i)^k sum A_alpha zeta^alpha; zero at zeta = 0."""
    return MultiplierFn(
        evaluator=lambda z: full_symbol_batch(op, z),
        dim_in=op.dim_v,
        dim_out=op.dim_w,
        zero_mode=ZeroModePolicy.ZERO,
        label=op.label(),
    )


def projection_multiplier(op: OperatorSpec, rank_tol: float = DEFAULT_RANK_TOL) -> MultiplierFn:
    """pi(zeta) = A(zeta)^+ A(zeta), identity at zeta = 0."""
    return MultiplierFn(
        evaluator=lambda z: projection_batch(op, z, rank_tol),
        dim_in=op.dim_v,
        dim_out=op.dim_v,
        label=f"pi[{op.label()}]",
    )


def apply_operator(op: OperatorSpec, f: TorusField) -> TorusField:
    """A f computed spectrally with the full symbol."""
    return apply_multiplier(f, symbol_multiplier(op))
