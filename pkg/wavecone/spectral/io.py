"""Field files and norm tables.

Binary layout: a little-endian int64 header [d, n, dimV] followed by the
values as little-endian complex128 in (component, *grid) C order. A JSON
sidecar ``<file>.json`` records the same header plus the real flag.
"""

from __future__ import annotations

import csv
import json
from collections.abc import Iterable, Mapping
from pathlib import Path

import numpy as np
from pydantic import BaseModel, Field

from wavecone.errors import SpecError, WaveconeError
from wavecone.spectral.grid import TorusField, TorusGrid

HEADER_DTYPE = np.dtype("<i8")
VALUE_DTYPE = np.dtype("<c16")


class FieldSidecar(BaseModel):
    """Metadata written next to a binary field file."""

    d: int = Field(ge=1)
    n: int = Field(ge=8)
    dimV: int = Field(ge=1)
    real: bool
    dtype: str = "complex128"
    layout: str = "component-major, C order"
    label: str = ""


def sidecar_path(path: Path) -> Path:
    return path.with_name(path.name + ".json")


def write_field(field: TorusField, path: Path, label: str = "") -> Path:
    """Write a field and its JSON sidecar; returns the sidecar path."""
    path.parent.mkdir(parents=True, exist_ok=True)
    header = np.array([field.grid.d, field.grid.n, field.dim], dtype=HEADER_DTYPE)
    with open(path, "wb") as f:
        f.write(header.tobytes())
        f.write(np.ascontiguousarray(field.values, dtype=VALUE_DTYPE).tobytes())
    sidecar = FieldSidecar(
        d=field.grid.d, n=field.grid.n, dimV=field.dim, real=field.real, label=label
    )
    meta = sidecar_path(path)
    meta.write_text(json.dumps(sidecar.model_dump(mode="json"), indent=2, sort_keys=True) + "\n")
    return meta


def read_field(path: Path) -> TorusField:
    """Read a binary field; the sidecar, when present, restores the real flag.

    Raises:
        SpecError: If the file is missing, truncated or its header is invalid
    """
    if not path.exists():
        raise SpecError(f"Field file not found: {path}")
    raw = path.read_bytes()
    if len(raw) < 3 * HEADER_DTYPE.itemsize:
        raise SpecError(f"{path}: file too short for a field header")
    d, n, dim = (int(x) for x in np.frombuffer(raw[:24], dtype=HEADER_DTYPE))
    try:
        grid = TorusGrid(d=d, n=n)
    except WaveconeError as e:
        raise SpecError(f"{path}: invalid header: {e}") from e
    expected = dim * grid.size * VALUE_DTYPE.itemsize
    body = raw[24:]
    if dim < 1 or len(body) != expected:
        raise SpecError(f"{path}: expected {expected} bytes of values, found {len(body)}")
    values = np.frombuffer(body, dtype=VALUE_DTYPE).reshape(dim, *grid.shape).astype(np.complex128)
    meta = sidecar_path(path)
    if meta.exists():
        sidecar = FieldSidecar.model_validate_json(meta.read_text())
        if (sidecar.d, sidecar.n, sidecar.dimV) != (d, n, dim):
            raise SpecError(f"{meta}: sidecar does not match the binary header")
        if sidecar.real:
            return TorusField(grid=grid, values=values.real)
    return TorusField(grid=grid, values=values)


def format_number(value: object) -> str:
    if isinstance(value, bool) or value is None:
        return "" if value is None else str(value).lower()
    if isinstance(value, float | np.floating):
        return repr(float(value))
    return str(value)


def write_rows_csv(rows: Iterable[Mapping[str, object]], columns: list[str], path: Path) -> None:
    """Write rows with fixed columns; floats use repr so reruns are byte-identical."""
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", newline="") as f:
        writer = csv.writer(f, lineterminator="\n")
        writer.writerow(columns)
        for row in rows:
            writer.writerow([format_number(row.get(c)) for c in columns])


def write_norms_csv(rows: Iterable[Mapping[str, object]], path: Path) -> None:
    """Norm/residual table; columns come from the first row."""
    rows = list(rows)
    columns = list(rows[0]) if rows else []
    write_rows_csv(rows, columns, path)
