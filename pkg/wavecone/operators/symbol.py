"""Symbol evaluation and operator algebra (adjoint, composition, scaling).

Rank, kernel and image computations use the reduced symbol sum A_alpha xi^alpha;
the full symbol carries the extra (2 pi i)^k factor.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from wavecone.errors import DimensionError
from wavecone.operators.multiindex import MultiIndex
from wavecone.operators.spec import Matrix, OperatorSpec


@dataclass(frozen=True, eq=False)
class SymbolValue:
    """Symbol matrix of an operator at one frequency."""

    freq: np.ndarray
    matrix: np.ndarray
    reduced: bool

    def __post_init__(self) -> None:
        if not np.all(np.isfinite(self.matrix)):
            raise ValueError("symbol matrix has non-finite entries")


def full_factor(k: int) -> complex:
    return complex((2j * np.pi) ** k)


def _as_frequencies(op: OperatorSpec, xis: np.ndarray) -> np.ndarray:
    xis = np.asarray(xis, dtype=np.float64)
    if xis.ndim == 1:
        xis = xis[None, :]
    if xis.ndim != 2 or xis.shape[1] != op.d:
        raise DimensionError(f"frequencies must have {op.d} components, got shape {xis.shape}")
    if not np.all(np.isfinite(xis)):
        raise ValueError("frequencies must be finite")
    return xis


def reduced_symbol_batch(op: OperatorSpec, xis: np.ndarray) -> np.ndarray:
    """Reduced symbols at a batch of frequencies, shape (N, dimW, dimV)."""
    xis = _as_frequencies(op, xis)
    stack, alphas = op.coefficient_stack
    if not alphas:
        return np.zeros((xis.shape[0], op.dim_w, op.dim_v))
    monomials = np.stack([alpha.monomial(xis) for alpha in alphas], axis=1)
    return np.tensordot(monomials, stack, axes=1)


def full_symbol_batch(op: OperatorSpec, xis: np.ndarray) -> np.ndarray:
    """Full symbols (2 pi i)^k sum A_alpha xi^alpha, shape (N, dimW, dimV)."""
    return full_factor(op.k) * reduced_symbol_batch(op, xis)


def symbol_eval(op: OperatorSpec, xi: np.ndarray | list[float], reduced: bool = False) -> SymbolValue:
    """Evaluate the (reduced or full) symbol of op at a single frequency.

    Args:
        op: Operator specification
        xi: Frequency vector with op.d components
        reduced: Strip the (2 pi i)^k factor when True

    Returns:
        SymbolValue with a dimW x dimV matrix

    Raises:
        DimensionError: If xi has the wrong number of components
    """
    freq = np.asarray(xi, dtype=np.float64)
    if freq.ndim != 1:
        raise DimensionError("symbol_eval expects a single frequency vector")
    batch = reduced_symbol_batch(op, freq)[0]
    matrix = batch.astype(np.complex128) if reduced else full_factor(op.k) * batch
    return SymbolValue(freq=freq, matrix=matrix, reduced=reduced)


def _transpose(matrix: Matrix) -> Matrix:
    return tuple(zip(*matrix, strict=True))


def _matmul(a: Matrix, b: Matrix) -> Matrix:
    columns = _transpose(b)
    return tuple(
        tuple(sum((x * y for x, y in zip(row, col, strict=True)), Fraction(0)) for col in columns)
        for row in a
    )


def _add(a: Matrix, b: Matrix) -> Matrix:
    return tuple(
        tuple(x + y for x, y in zip(ra, rb, strict=True)) for ra, rb in zip(a, b, strict=True)
    )


def _scale(a: Matrix, c: Fraction) -> Matrix:
    return tuple(tuple(c * x for x in row) for row in a)


def adjoint(op: OperatorSpec, formal: bool = False) -> OperatorSpec:
    """Adjoint operator with coefficients A_alpha^T.

    With formal=True the coefficients are multiplied by (-1)^k, which makes the
    full symbol equal the conjugate transpose of op's full symbol.
    """
    sign = Fraction(-1) ** op.k if formal else Fraction(1)
    return OperatorSpec(
        d=op.d,
        k=op.k,
        dim_v=op.dim_w,
        dim_w=op.dim_v,
        coeffs={alpha: _scale(_transpose(m), sign) for alpha, m in op.coeffs.items()},
        name=f"adjoint({op.name})" if op.name else "",
    )


def compose(outer: OperatorSpec, inner: OperatorSpec) -> OperatorSpec:
    """Composition outer o inner via discrete convolution over multi-indices.

    C_gamma = sum_{alpha + beta = gamma} A_alpha B_beta; the result may be the
    zero operator (for instance an annihilator composed with its operator).

    Raises:
        DimensionError: If outer.dimV != inner.dimW or the space dimensions differ
    """
    if outer.d != inner.d:
        raise DimensionError(f"space dimensions differ: {outer.d} vs {inner.d}")
    if outer.dim_v != inner.dim_w:
        raise DimensionError(
            f"outer dimV={outer.dim_v} does not match inner dimW={inner.dim_w}"
        )
    out: dict[MultiIndex, Matrix] = {}
    for alpha, a in outer.coeffs.items():
        for beta, b in inner.coeffs.items():
            gamma = alpha + beta
            product = _matmul(a, b)
            out[gamma] = _add(out[gamma], product) if gamma in out else product
    name = f"{outer.name}*{inner.name}" if outer.name and inner.name else ""
    return OperatorSpec(
        d=outer.d,
        k=outer.k + inner.k,
        dim_v=inner.dim_v,
        dim_w=outer.dim_w,
        coeffs=out,
        name=name,
        allow_zero=True,
    )


def scale(op: OperatorSpec, c: Fraction | int | str) -> OperatorSpec:
    """Multiply every coefficient by a nonzero rational."""
    factor = Fraction(c)
    if factor == 0:
        raise ValueError("scale factor must be nonzero")
    return OperatorSpec(
        d=op.d,
        k=op.k,
        dim_v=op.dim_v,
        dim_w=op.dim_w,
        coeffs={alpha: _scale(m, factor) for alpha, m in op.coeffs.items()},
        name=op.name,
    )
