"""Catalog of named operators.

Matrix-valued fields are flattened row-major: entry (i, j) of an m x d matrix
sits at index i * d + j.
"""

from __future__ import annotations

from collections.abc import Callable
from fractions import Fraction
from math import comb

from wavecone.errors import DimensionError, UnknownBuiltinError
from wavecone.operators.multiindex import MultiIndex, multi_indices
from wavecone.operators.spec import Matrix, OperatorSpec


def _zeros(rows: int, cols: int) -> list[list[Fraction]]:
    return [[Fraction(0)] * cols for _ in range(rows)]


def _freeze(grid: list[list[Fraction]]) -> Matrix:
    return tuple(tuple(row) for row in grid)


def _check(d: int, m: int, min_d: int = 1) -> None:
    if d < min_d:
        raise DimensionError(f"d must be >= {min_d}, got {d}")
    if m < 1:
        raise DimensionError(f"m must be >= 1, got {m}")


def gradient(d: int, m: int = 1) -> OperatorSpec:
    """Du for u: R^d -> R^m, values in m x d matrices."""
    _check(d, m)
    coeffs = {}
    for j in range(d):
        grid = _zeros(m * d, m)
        for i in range(m):
            grid[i * d + j][i] = Fraction(1)
        coeffs[MultiIndex.unit(d, j)] = _freeze(grid)
    return OperatorSpec(d=d, k=1, dim_v=m, dim_w=m * d, coeffs=coeffs, name=f"gradient(d={d},m={m})")


def hessian_k(d: int, m: int = 1, k: int = 2) -> OperatorSpec:
    """D^k u with one output per distinct partial derivative (sorted multi-indices)."""
    _check(d, m)
    if k < 1:
        raise DimensionError(f"order k must be >= 1, got {k}")
    betas = list(multi_indices(d, k))
    width = comb(d + k - 1, k)
    coeffs = {}
    for pos, beta in enumerate(betas):
        grid = _zeros(m * width, m)
        for i in range(m):
            grid[i * width + pos][i] = Fraction(1)
        coeffs[beta] = _freeze(grid)
    return OperatorSpec(
        d=d, k=k, dim_v=m, dim_w=m * width, coeffs=coeffs, name=f"hessian_k(d={d},m={m},k={k})"
    )


def divergence_rows(d: int, m: int | None = None) -> OperatorSpec:
    """Row-wise divergence of m x d matrix fields (square d x d by default)."""
    rows = d if m is None else m
    _check(d, rows)
    coeffs = {}
    for j in range(d):
        grid = _zeros(rows, rows * d)
        for i in range(rows):
            grid[i][i * d + j] = Fraction(1)
        coeffs[MultiIndex.unit(d, j)] = _freeze(grid)
    return OperatorSpec(
        d=d, k=1, dim_v=rows * d, dim_w=rows, coeffs=coeffs, name=f"divergence_rows(d={d})"
    )


def curl(d: int, m: int = 1) -> OperatorSpec:
    """Row-wise curl of m x d matrix fields: (d_j r_l - d_l r_j) for j < l.

    The kernel of the symbol at xi is {a (x) xi : a in R^m}.
    """
    _check(d, m, min_d=2)
    pairs = [(j, jj) for j in range(d) for jj in range(j + 1, d)]
    dim_w = m * len(pairs)
    grids = {j: _zeros(dim_w, m * d) for j in range(d)}
    for i in range(m):
        for p, (j, jj) in enumerate(pairs):
            row = i * len(pairs) + p
            grids[j][row][i * d + jj] += 1
            grids[jj][row][i * d + j] -= 1
    coeffs = {MultiIndex.unit(d, j): _freeze(grid) for j, grid in grids.items()}
    return OperatorSpec(d=d, k=1, dim_v=m * d, dim_w=dim_w, coeffs=coeffs, name=f"curl(d={d},m={m})")


def symmetric_gradient(d: int, m: int | None = None) -> OperatorSpec:
    """(Du + Du^T)/2 for u: R^d -> R^d, values as full d x d matrices."""
    _check(d, 1)
    if m is not None and m != d:
        raise DimensionError(f"symmetric_gradient acts on R^d-valued maps, got m={m} for d={d}")
    half = Fraction(1, 2)
    grids = {j: _zeros(d * d, d) for j in range(d)}
    for i in range(d):
        for j in range(d):
            grids[j][i * d + j][i] += half
            grids[i][i * d + j][j] += half
    coeffs = {MultiIndex.unit(d, j): _freeze(grid) for j, grid in grids.items()}
    return OperatorSpec(
        d=d, k=1, dim_v=d, dim_w=d * d, coeffs=coeffs, name=f"symmetric_gradient(d={d})"
    )


def laplacian(d: int, m: int = 1) -> OperatorSpec:
    """Componentwise Laplacian, reduced symbol |xi|^2 id_m."""
    _check(d, m)
    identity = _freeze([[Fraction(int(i == j)) for j in range(m)] for i in range(m)])
    coeffs = {MultiIndex.unit(d, j, power=2): identity for j in range(d)}
    return OperatorSpec(d=d, k=2, dim_v=m, dim_w=m, coeffs=coeffs, name=f"laplacian(d={d},m={m})")


BUILTINS: dict[str, Callable[..., OperatorSpec]] = {
    "gradient": gradient,
    "hessian_k": hessian_k,
    "divergence_rows": divergence_rows,
    "curl": curl,
    "symmetric_gradient": symmetric_gradient,
    "laplacian": laplacian,
}


def builtin(name: str, d: int, m: int | None = None, k: int | None = None) -> OperatorSpec:
    """Look up a catalog operator.

    Args:
        name: One of BUILTINS
        d: Space dimension
        m: Number of value components (rows), where the operator has one
        k: Order, only for hessian_k

    Raises:
        UnknownBuiltinError: If name is not in the catalog
        DimensionError: If d, m or k are invalid
    """
    if name not in BUILTINS:
        raise UnknownBuiltinError(
            f"Unknown builtin operator '{name}'. Available: {', '.join(sorted(BUILTINS))}"
        )
    if k is not None and name != "hessian_k":
        raise DimensionError(f"order k only applies to hessian_k, not {name}")
    kwargs: dict[str, int] = {}
    if m is not None:
        kwargs["m"] = m
    if k is not None:
        kwargs["k"] = k
    return BUILTINS[name](d, **kwargs)
