"""Operator specifications: homogeneous constant-coefficient operators.

An OperatorSpec stores the coefficient matrices A_alpha (|alpha| = k) of

    A u = sum_{|alpha| = k} A_alpha d^alpha u

as exact rationals. The wire format is JSON:

```json
{"d": 2, "k": 1, "dimV": 1, "dimW": 2,
 "coeffs": [{"alpha": [1, 0], "matrix": [["1"], ["0"]]},
            {"alpha": [0, 1], "matrix": [["0"], ["1"]]}]}
```

Rationals are written as "p/q" strings. The canonical serialization (sorted
multi-indices, compact separators) is hashed with sha256 for report metadata.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from pathlib import Path

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, ValidationError, field_validator

from wavecone.errors import DimensionError, SpecError
from wavecone.operators.multiindex import MultiIndex

Matrix = tuple[tuple[Fraction, ...], ...]


def parse_rational(value: str | int | float | Fraction) -> Fraction:
    """Parse "p/q", integer or decimal text into a Fraction."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise ValueError(f"not a rational: {value!r}")
    try:
        return Fraction(str(value).strip())
    except (ValueError, ZeroDivisionError) as e:
        raise ValueError(f"not a rational: {value!r}") from e


def format_rational(value: Fraction) -> str:
    return f"{value.numerator}/{value.denominator}"


def as_matrix(rows: object) -> Matrix:
    """Coerce nested sequences of rational-like values to an immutable Fraction matrix."""
    return tuple(tuple(parse_rational(x) for x in row) for row in rows)  # type: ignore[attr-defined]


def _is_zero(matrix: Matrix) -> bool:
    return all(x == 0 for row in matrix for x in row)


@dataclass(frozen=True)
class OperatorSpec:
    """Homogeneous operator of order k from V = R^dim_v to W = R^dim_w on R^d.

    Zero coefficient matrices are dropped on construction, so two specs compare
    equal exactly when they define the same operator.
    """

    d: int
    k: int
    dim_v: int
    dim_w: int
    coeffs: dict[MultiIndex, Matrix]
    name: str = field(default="", compare=False)
    allow_zero: bool = field(default=False, compare=False, repr=False)

    def __post_init__(self) -> None:
        if self.d < 1:
            raise DimensionError(f"space dimension d must be >= 1, got {self.d}")
        if self.k < 1:
            raise SpecError(f"operator order k must be >= 1, got {self.k}")
        if self.dim_v < 1 or self.dim_w < 1:
            raise DimensionError(f"dimV and dimW must be >= 1, got {self.dim_v}, {self.dim_w}")

        cleaned: dict[MultiIndex, Matrix] = {}
        for alpha, matrix in self.coeffs.items():
            alpha = MultiIndex.of(alpha.entries if isinstance(alpha, MultiIndex) else alpha)
            if alpha.d != self.d:
                raise DimensionError(f"multi-index {alpha} has {alpha.d} entries, expected d={self.d}")
            if alpha.modulus != self.k:
                raise SpecError(f"multi-index {alpha} has modulus {alpha.modulus}, expected k={self.k}")
            matrix = as_matrix(matrix)
            if len(matrix) != self.dim_w or any(len(row) != self.dim_v for row in matrix):
                raise DimensionError(
                    f"coefficient at {alpha} must be {self.dim_w}x{self.dim_v}"
                )
            if alpha in cleaned:
                raise SpecError(f"duplicate coefficient for multi-index {alpha}")
            if not _is_zero(matrix):
                cleaned[alpha] = matrix
        if not cleaned and not self.allow_zero:
            raise SpecError("operator has no nonzero coefficient")
        object.__setattr__(self, "coeffs", dict(sorted(cleaned.items())))

    def __hash__(self) -> int:
        # Consistent with __eq__: name and allow_zero do not take part.
        return hash((self.d, self.k, self.dim_v, self.dim_w, tuple(self.coeffs.items())))

    @property
    def is_zero(self) -> bool:
        return not self.coeffs

    @cached_property
    def coefficient_stack(self) -> tuple[np.ndarray, tuple[MultiIndex, ...]]:
        """Float coefficients as an (A, W, V) array with the matching multi-indices."""
        alphas = tuple(self.coeffs)
        if not alphas:
            return np.zeros((0, self.dim_w, self.dim_v)), alphas
        stack = np.array(
            [[[float(x) for x in row] for row in self.coeffs[a]] for a in alphas],
            dtype=np.float64,
        )
        return stack, alphas

    def label(self) -> str:
        return self.name or f"operator(d={self.d},k={self.k},V={self.dim_v},W={self.dim_w})"


class CoefficientEntry(BaseModel):
    """One coefficient matrix A_alpha in the JSON wire format."""

    model_config = ConfigDict(extra="forbid")

    alpha: list[int] = Field(..., min_length=1, description="Multi-index entries")
    matrix: list[list[str]] = Field(..., min_length=1, description="Rows of rationals")

    @field_validator("alpha")
    @classmethod
    def validate_alpha(cls, v: list[int]) -> list[int]:
        """Multi-index entries must be non-negative."""
        if any(a < 0 for a in v):
            raise ValueError("multi-index entries must be non-negative")
        return v

    @field_validator("matrix", mode="before")
    @classmethod
    def validate_matrix(cls, v: object) -> list[list[str]]:
        """Accept numbers or "p/q" strings and normalize to "p/q"."""
        if not isinstance(v, list) or not all(isinstance(row, list) for row in v):
            raise ValueError("matrix must be a list of rows")
        return [[format_rational(parse_rational(x)) for x in row] for row in v]


class OperatorSpecModel(BaseModel):
    """JSON wire model for an OperatorSpec."""

    model_config = ConfigDict(extra="forbid", populate_by_name=True)

    d: int = Field(..., ge=1, description="Space dimension")
    k: int = Field(..., ge=1, description="Operator order")
    dim_v: int = Field(..., ge=1, alias="dimV", description="Dimension of the value space V")
    dim_w: int = Field(..., ge=1, alias="dimW", description="Dimension of the target space W")
    coeffs: list[CoefficientEntry] = Field(default_factory=list)
    name: str | None = Field(None, description="Optional display name")

    def to_spec(self) -> OperatorSpec:
        coeffs: dict[MultiIndex, Matrix] = {}
        for entry in self.coeffs:
            alpha = MultiIndex.of(entry.alpha)
            if alpha in coeffs:
                raise SpecError(f"duplicate coefficient for multi-index {alpha}")
            coeffs[alpha] = as_matrix(entry.matrix)
        return OperatorSpec(
            d=self.d,
            k=self.k,
            dim_v=self.dim_v,
            dim_w=self.dim_w,
            coeffs=coeffs,
            name=self.name or "",
        )

    @classmethod
    def from_spec(cls, op: OperatorSpec) -> OperatorSpecModel:
        return cls(
            d=op.d,
            k=op.k,
            dimV=op.dim_v,
            dimW=op.dim_w,
            coeffs=[
                CoefficientEntry(
                    alpha=list(alpha.entries),
                    matrix=[[format_rational(x) for x in row] for row in matrix],
                )
                for alpha, matrix in op.coeffs.items()
            ],
            name=op.name or None,
        )


def to_payload(op: OperatorSpec, include_name: bool = True) -> dict:
    """JSON-ready dict of an operator spec."""
    payload = OperatorSpecModel.from_spec(op).model_dump(
        mode="json", by_alias=True, exclude_none=True
    )
    if not include_name:
        payload.pop("name", None)
    return payload


def to_json(op: OperatorSpec) -> str:
    return json.dumps(to_payload(op), indent=2) + "\n"


def canonical_json(op: OperatorSpec) -> str:
    """Name-free canonical serialization used for hashing."""
    return json.dumps(to_payload(op, include_name=False), sort_keys=True, separators=(",", ":"))


def spec_hash(op: OperatorSpec) -> str:
    """SHA256 hex digest of the canonical serialization."""
    return hashlib.sha256(canonical_json(op).encode("utf-8")).hexdigest()


def describe_validation_error(error: ValidationError) -> str:
    """Flatten pydantic errors to 'field.path: message' diagnostics."""
    parts = []
    for err in error.errors():
        loc = ".".join(str(p) for p in err["loc"]) or "<root>"
        parts.append(f"{loc}: {err['msg']}")
    return "; ".join(parts)


def from_json(text: str, source: str = "<string>") -> OperatorSpec:
    """Parse an operator spec from JSON text.

    Raises:
        SpecError: On malformed JSON (with line/column) or schema violations (with field path)
    """
    try:
        data = json.loads(text)
    except json.JSONDecodeError as e:
        raise SpecError(
            f"{source}: invalid JSON at line {e.lineno}, column {e.colno}: {e.msg}"
        ) from e
    try:
        model = OperatorSpecModel.model_validate(data)
    except ValidationError as e:
        raise SpecError(f"{source}: {describe_validation_error(e)}") from e
    try:
        return model.to_spec()
    except SpecError as e:
        raise type(e)(f"{source}: {e}") from e


def load_spec_file(path: Path) -> OperatorSpec:
    if not path.exists():
        raise SpecError(f"Operator spec not found: {path}")
    return from_json(path.read_text(), source=str(path))


def save_spec_file(op: OperatorSpec, path: Path) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(to_json(op))
