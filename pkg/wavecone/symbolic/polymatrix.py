"""Matrices of multivariate polynomials over QQ.

Entries are sympy ``Poly`` objects in the generators xi1..xid with domain QQ,
so every identity checked here (adjugate, annihilator) is exact. Symbols are
always the reduced ones: sum A_alpha xi^alpha without the (2 pi i)^k factor,
which makes B* = B^T at the polynomial level.
"""

from __future__ import annotations

import json
import logging
from dataclasses import dataclass
from fractions import Fraction
from typing import Any

import numpy as np
import sympy as sp
from pydantic import BaseModel, Field, field_validator
from sympy.polys.polyerrors import ExactQuotientFailed

from wavecone.errors import DimensionError, SymbolicBudgetError
from wavecone.operators.multiindex import MultiIndex
from wavecone.operators.spec import Matrix, OperatorSpec, format_rational, parse_rational

logger = logging.getLogger(__name__)

MAX_DET_SIZE = 8


def frequency_symbols(d: int) -> tuple[sp.Symbol, ...]:
    """Generators xi1, ..., xid."""
    if d < 1:
        raise DimensionError(f"d must be >= 1, got {d}")
    return tuple(sp.symbols(f"xi1:{d + 1}", real=True))


def zero_poly(gens: tuple[sp.Symbol, ...]) -> sp.Poly:
    return sp.Poly(0, *gens, domain=sp.QQ)


def constant_poly(value: int | Fraction, gens: tuple[sp.Symbol, ...]) -> sp.Poly:
    value = Fraction(value)
    return sp.Poly(sp.Rational(value.numerator, value.denominator), *gens, domain=sp.QQ)


def poly_from_terms(terms: dict[MultiIndex, Fraction], gens: tuple[sp.Symbol, ...]) -> sp.Poly:
    rep = {
        alpha.entries: sp.Rational(c.numerator, c.denominator) for alpha, c in terms.items() if c != 0
    }
    if not rep:
        return zero_poly(gens)
    return sp.Poly.from_dict(rep, *gens, domain=sp.QQ)


def poly_terms(p: sp.Poly) -> dict[MultiIndex, Fraction]:
    """Nonzero terms of p keyed by exponent multi-index, in lexicographic order."""
    out = {}
    for monom, coeff in p.terms():
        if coeff != 0:
            c = sp.Rational(coeff)
            out[MultiIndex(tuple(int(e) for e in monom))] = Fraction(int(c.p), int(c.q))
    return dict(sorted(out.items()))


def _entry_degree(p: sp.Poly) -> int | None:
    """Common degree of all terms, None for the zero polynomial.

    Raises:
        ValueError: If p is not homogeneous
    """
    if p.is_zero:
        return None
    degrees = {sum(monom) for monom, _ in p.terms()}
    if len(degrees) != 1:
        raise ValueError(f"polynomial {p.as_expr()} is not homogeneous")
    return degrees.pop()


@dataclass(frozen=True, eq=False)
class PolyMatrix:
    """Rectangular grid of polynomials; ``degree`` is the common homogeneity degree if known."""

    entries: tuple[tuple[sp.Poly, ...], ...]
    gens: tuple[sp.Symbol, ...]
    degree: int | None = None

    def __post_init__(self) -> None:
        if not self.entries or not self.entries[0]:
            raise DimensionError("polynomial matrix must have at least one row and column")
        width = len(self.entries[0])
        if any(len(row) != width for row in self.entries):
            raise DimensionError("polynomial matrix rows have different lengths")
        if self.degree is not None:
            for row in self.entries:
                for p in row:
                    deg = _entry_degree(p)
                    if deg is not None and deg != self.degree:
                        raise ValueError(
                            f"entry {p.as_expr()} has degree {deg}, expected {self.degree}"
                        )

    @property
    def rows(self) -> int:
        return len(self.entries)

    @property
    def cols(self) -> int:
        return len(self.entries[0])

    @property
    def shape(self) -> tuple[int, int]:
        return self.rows, self.cols

    @property
    def d(self) -> int:
        return len(self.gens)

    def __getitem__(self, index: tuple[int, int]) -> sp.Poly:
        i, j = index
        return self.entries[i][j]

    @classmethod
    def from_grid(
        cls, grid: list[list[sp.Poly]], gens: tuple[sp.Symbol, ...], degree: int | None = None
    ) -> PolyMatrix:
        return cls(entries=tuple(tuple(row) for row in grid), gens=gens, degree=degree)

    @classmethod
    def identity(cls, n: int, gens: tuple[sp.Symbol, ...]) -> PolyMatrix:
        grid = [
            [constant_poly(1 if i == j else 0, gens) for j in range(n)] for i in range(n)
        ]
        return cls.from_grid(grid, gens, degree=0)

    @classmethod
    def zeros(cls, rows: int, cols: int, gens: tuple[sp.Symbol, ...]) -> PolyMatrix:
        return cls.from_grid([[zero_poly(gens)] * cols for _ in range(rows)], gens)

    def is_zero(self) -> bool:
        return all(p.is_zero for row in self.entries for p in row)

    def is_square(self) -> bool:
        return self.rows == self.cols

    def transpose(self) -> PolyMatrix:
        grid = [[self.entries[i][j] for i in range(self.rows)] for j in range(self.cols)]
        return PolyMatrix.from_grid(grid, self.gens, self.degree)

    def _check_gens(self, other: PolyMatrix) -> None:
        if self.gens != other.gens:
            raise DimensionError("polynomial matrices use different generators")

    def __matmul__(self, other: PolyMatrix) -> PolyMatrix:
        self._check_gens(other)
        if self.cols != other.rows:
            raise DimensionError(f"cannot multiply {self.shape} by {other.shape}")
        grid = []
        for i in range(self.rows):
            row = []
            for j in range(other.cols):
                acc = zero_poly(self.gens)
                for t in range(self.cols):
                    a, b = self.entries[i][t], other.entries[t][j]
                    if not a.is_zero and not b.is_zero:
                        acc = acc + a * b
                row.append(acc)
            grid.append(row)
        degree = None
        if self.degree is not None and other.degree is not None:
            degree = self.degree + other.degree
        return PolyMatrix.from_grid(grid, self.gens, degree)

    def _combine(self, other: PolyMatrix, sign: int) -> PolyMatrix:
        self._check_gens(other)
        if self.shape != other.shape:
            raise DimensionError(f"shape mismatch: {self.shape} vs {other.shape}")
        grid = [
            [a + b if sign > 0 else a - b for a, b in zip(ra, rb, strict=True)]
            for ra, rb in zip(self.entries, other.entries, strict=True)
        ]
        degree = self.degree if self.degree == other.degree else None
        return PolyMatrix.from_grid(grid, self.gens, degree)

    def __add__(self, other: PolyMatrix) -> PolyMatrix:
        return self._combine(other, 1)

    def __sub__(self, other: PolyMatrix) -> PolyMatrix:
        return self._combine(other, -1)

    def scale(self, p: sp.Poly) -> PolyMatrix:
        """Multiply every entry by the polynomial p."""
        grid = [[p * e for e in row] for row in self.entries]
        pdeg = _entry_degree(p)
        degree = None if self.degree is None or pdeg is None else self.degree + pdeg
        return PolyMatrix.from_grid(grid, self.gens, degree)

    def minor(self, i: int, j: int) -> PolyMatrix:
        grid = [
            [p for c, p in enumerate(row) if c != j] for r, row in enumerate(self.entries) if r != i
        ]
        return PolyMatrix.from_grid(grid, self.gens, self.degree)

    def homogeneous_degree(self) -> int | None:
        """Audit the entries: their common degree, or None if the matrix is zero.

        Raises:
            ValueError: If entries are inhomogeneous or have different degrees
        """
        degrees = {_entry_degree(p) for row in self.entries for p in row} - {None}
        if len(degrees) > 1:
            raise ValueError(f"entries have different degrees: {sorted(degrees)}")  # type: ignore[type-var]
        return degrees.pop() if degrees else None

    def evaluate(self, xis: np.ndarray) -> np.ndarray:
        """Numerical values at a batch of frequencies, shape (N, rows, cols)."""
        xis = np.atleast_2d(np.asarray(xis, dtype=np.float64))
        if xis.shape[1] != self.d:
            raise DimensionError(f"frequencies must have {self.d} components")
        out = np.zeros((xis.shape[0], self.rows, self.cols))
        for i, row in enumerate(self.entries):
            for j, p in enumerate(row):
                for alpha, c in poly_terms(p).items():
                    out[:, i, j] += float(c) * alpha.monomial(xis)
        return out

    def to_model(self) -> PolyMatrixModel:
        entries = []
        for i, row in enumerate(self.entries):
            for j, p in enumerate(row):
                if p.is_zero:
                    continue
                terms = [
                    PolyTermModel(alpha=list(alpha.entries), coeff=format_rational(c))
                    for alpha, c in poly_terms(p).items()
                ]
                entries.append(PolyEntryModel(row=i, col=j, terms=terms))
        return PolyMatrixModel(
            d=self.d, rows=self.rows, cols=self.cols, degree=self.degree, entries=entries
        )

    def to_json(self) -> str:
        return json.dumps(self.to_model().model_dump(mode="json"), indent=2)


class PolyTermModel(BaseModel):
    alpha: list[int]
    coeff: str

    @field_validator("coeff")
    @classmethod
    def normalize_coeff(cls, v: str) -> str:
        return format_rational(parse_rational(v))


class PolyEntryModel(BaseModel):
    row: int = Field(ge=0)
    col: int = Field(ge=0)
    terms: list[PolyTermModel]


class PolyMatrixModel(BaseModel):
    """Wire form: shape plus the JSON list of nonzero {row, col, terms} entries."""

    d: int = Field(ge=1)
    rows: int = Field(ge=1)
    cols: int = Field(ge=1)
    degree: int | None = None
    entries: list[PolyEntryModel] = Field(default_factory=list)

    def to_polymatrix(self) -> PolyMatrix:
        gens = frequency_symbols(self.d)
        grid: list[list[Any]] = [[zero_poly(gens)] * self.cols for _ in range(self.rows)]
        for entry in self.entries:
            if entry.row >= self.rows or entry.col >= self.cols:
                raise DimensionError(f"entry ({entry.row}, {entry.col}) is outside the matrix")
            terms = {}
            for term in entry.terms:
                if len(term.alpha) != self.d:
                    raise DimensionError(f"term exponent {term.alpha} does not have {self.d} entries")
                terms[MultiIndex.of(term.alpha)] = parse_rational(term.coeff)
            grid[entry.row][entry.col] = poly_from_terms(terms, gens)
        return PolyMatrix.from_grid(grid, gens, self.degree)


def polymatrix_from_json(text: str) -> PolyMatrix:
    return PolyMatrixModel.model_validate_json(text).to_polymatrix()


def symbol_polymatrix(op: OperatorSpec) -> PolyMatrix:
    """Exact reduced symbol sum A_alpha xi^alpha as a dimW x dimV polynomial matrix."""
    gens = frequency_symbols(op.d)
    grid = []
    for w in range(op.dim_w):
        row = []
        for v in range(op.dim_v):
            row.append(poly_from_terms({alpha: m[w][v] for alpha, m in op.coeffs.items()}, gens))
        grid.append(row)
    return PolyMatrix.from_grid(grid, gens, degree=op.k)


def polymatrix_to_operator(M: PolyMatrix, name: str = "") -> OperatorSpec:
    """Read a homogeneous polynomial matrix back as an OperatorSpec of the same order.

    Raises:
        ValueError: If M is zero, inhomogeneous or of degree 0
    """
    degree = M.homogeneous_degree()
    if degree is None:
        raise ValueError("cannot infer the order of a zero polynomial matrix")
    if degree < 1:
        raise ValueError("operators must have order >= 1")
    grids: dict[MultiIndex, list[list[Fraction]]] = {}
    for i, row in enumerate(M.entries):
        for j, p in enumerate(row):
            for alpha, c in poly_terms(p).items():
                grid = grids.setdefault(alpha, [[Fraction(0)] * M.cols for _ in range(M.rows)])
                grid[i][j] = c
    coeffs: dict[MultiIndex, Matrix] = {
        alpha: tuple(tuple(r) for r in grid) for alpha, grid in grids.items()
    }
    return OperatorSpec(
        d=M.d, k=degree, dim_v=M.cols, dim_w=M.rows, coeffs=coeffs, name=name
    )


def laplacian_symbol(op_b: OperatorSpec) -> PolyMatrix:
    """Reduced symbol of Delta_B = B* B, symmetric and homogeneous of degree 2k."""
    b = symbol_polymatrix(op_b)
    return b.transpose() @ b


def _check_square(M: PolyMatrix) -> None:
    if not M.is_square():
        raise DimensionError(f"matrix must be square, got {M.shape}")
    if M.rows > MAX_DET_SIZE:
        raise SymbolicBudgetError(
            f"{M.rows}x{M.rows} polynomial determinant exceeds the size budget {MAX_DET_SIZE}"
        )


def _berkowitz_det(M: PolyMatrix) -> sp.Poly:
    expr = sp.Matrix([[p.as_expr() for p in row] for row in M.entries]).det(method="berkowitz")
    return sp.Poly(sp.expand(expr), *M.gens, domain=sp.QQ)


def _bareiss_det(M: PolyMatrix) -> sp.Poly:
    a = [list(row) for row in M.entries]
    n = M.rows
    sign = 1
    prev = constant_poly(1, M.gens)
    for k in range(n - 1):
        pivot = next((i for i in range(k, n) if not a[i][k].is_zero), None)
        if pivot is None:
            return zero_poly(M.gens)
        if pivot != k:
            a[k], a[pivot] = a[pivot], a[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]).exquo(prev)
        prev = a[k][k]
    det = a[n - 1][n - 1]
    return det if sign > 0 else -det


def poly_det(M: PolyMatrix) -> sp.Poly:
    """Exact determinant by fraction-free Bareiss elimination.

    Falls back to sympy's division-free Berkowitz algorithm if an elimination
    step is not an exact quotient.

    Raises:
        DimensionError: If M is not square
        SymbolicBudgetError: If M is larger than MAX_DET_SIZE
    """
    _check_square(M)
    try:
        return _bareiss_det(M)
    except ExactQuotientFailed:
        logger.debug("Bareiss step was not exact; using Berkowitz for %dx%d", M.rows, M.rows)
        return _berkowitz_det(M)


def poly_adjugate(M: PolyMatrix) -> PolyMatrix:
    """Transpose of the cofactor matrix, so adj(M) M = det(M) I.

    A 1x1 matrix has adjugate [1] (empty minor).
    """
    _check_square(M)
    n = M.rows
    if n == 1:
        return PolyMatrix.identity(1, M.gens)
    grid: list[list[Any]] = [[None] * n for _ in range(n)]
    for i in range(n):
        for j in range(n):
            cofactor = poly_det(M.minor(i, j))
            grid[j][i] = cofactor if (i + j) % 2 == 0 else -cofactor
    degree = None if M.degree is None else M.degree * (n - 1)
    return PolyMatrix.from_grid(grid, M.gens, degree)
