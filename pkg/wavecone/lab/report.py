"""Experiment reports: pydantic tables written as CSV and JSON.

Every report carries ``kind``, a ``metadata`` dict echoing the inputs (seed,
grid, operator hash, ...) and typed rows. Output is byte-deterministic: JSON
keys are sorted and floats are written with repr.
"""

from __future__ import annotations

import json
from collections.abc import Sequence
from pathlib import Path
from typing import Any, ClassVar, Literal

from pydantic import BaseModel, ConfigDict, Field, model_validator

from wavecone.lab.ladder import RunMode
from wavecone.spectral.io import write_rows_csv

ReportFormat = Literal["json", "csv"]


def bounded_ratio(numerator: float, tv_mu: float, tv_sigma: float) -> float:
    """numerator / (tv_mu + tv_sigma), with 0/0 read as 0."""
    denominator = tv_mu + tv_sigma
    if denominator == 0.0:
        return 0.0 if numerator == 0.0 else float("inf")
    return numerator / denominator


class _RatioRow(BaseModel):
    model_config = ConfigDict(extra="forbid", ser_json_inf_nan="constants")

    ratio: float

    def _ratio_inputs(self) -> tuple[float, float, float]:
        raise NotImplementedError

    @model_validator(mode="after")
    def check_ratio(self) -> _RatioRow:
        expected = bounded_ratio(*self._ratio_inputs())
        if self.ratio != expected:
            raise ValueError(f"ratio {self.ratio} does not match the recomputed value {expected}")
        return self


class ScaleRow(_RatioRow):
    """One mollification scale of a higher-integrability run."""

    scale: float = Field(gt=0)
    lp_norm: float = Field(ge=0)
    tv_mu: float = Field(ge=0)
    tv_sigma: float = Field(ge=0)
    cone_max_dist: float = Field(ge=0)
    M_inf: float = Field(ge=0)

    def _ratio_inputs(self) -> tuple[float, float, float]:
        return self.lp_norm, self.tv_mu, self.tv_sigma


class LocalCancelingRow(_RatioRow):
    n: int
    t: float
    neg_norm: float = Field(ge=0)
    tv_mu: float = Field(ge=0)
    tv_sigma: float = Field(ge=0)

    def _ratio_inputs(self) -> tuple[float, float, float]:
        return self.neg_norm, self.tv_mu, self.tv_sigma


class SwirlRow(BaseModel):
    epsilon: float
    inner_first: float
    full_first: float
    full_second: float
    sd_distance: float
    scaled_second: float
    split_residual: float


class LaminateRow(BaseModel):
    j: int
    a_free_residual: float
    pairing_error: float
    l1_distance: float
    expected_l1: float


class CompactnessRow(BaseModel):
    index: int
    mass: float
    tails: list[float]
    weakstar_step: float | None = None
    cone_violations: int | None = None


class Report(BaseModel):
    """Base class: subclasses fix ``kind``, the row type and the CSV columns."""

    model_config = ConfigDict(extra="forbid", ser_json_inf_nan="constants")

    COLUMNS: ClassVar[tuple[str, ...]] = ()

    kind: str
    metadata: dict[str, Any] = Field(default_factory=dict)
    rows: Sequence[BaseModel] = Field(default_factory=list)

    def columns(self) -> list[str]:
        return list(self.COLUMNS)

    def table(self) -> list[dict[str, Any]]:
        return [row.model_dump(mode="json") for row in self.rows]

    def to_json(self) -> str:
        return json.dumps(self.model_dump(mode="json"), indent=2, sort_keys=True) + "\n"

    def write(
        self,
        out_dir: Path,
        formats: Sequence[ReportFormat] = ("json", "csv"),
        stem: str | None = None,
    ) -> list[Path]:
        """Write ``<stem>.json`` and/or ``<stem>.csv``; stem defaults to the kind."""
        out_dir.mkdir(parents=True, exist_ok=True)
        name = stem or self.kind
        written = []
        if "json" in formats:
            path = out_dir / f"{name}.json"
            path.write_text(self.to_json())
            written.append(path)
        if "csv" in formats:
            path = out_dir / f"{name}.csv"
            write_rows_csv(self.table(), self.columns(), path)
            written.append(path)
        return written


class ExperimentReport(Report):
    """Higher-integrability ratio table across mollification scales."""

    COLUMNS: ClassVar[tuple[str, ...]] = (
        "scale",
        "lp_norm",
        "tv_mu",
        "tv_sigma",
        "ratio",
        "cone_max_dist",
        "M_inf",
    )

    kind: Literal["higher_integrability"] = "higher_integrability"
    mode: RunMode
    p: str
    rows: list[ScaleRow]

    @property
    def ratios(self) -> list[float]:
        return [row.ratio for row in self.rows]


class LocalCancelingReport(Report):
    COLUMNS: ClassVar[tuple[str, ...]] = ("n", "t", "neg_norm", "tv_mu", "tv_sigma", "ratio")

    kind: Literal["local_canceling"] = "local_canceling"
    rows: list[LocalCancelingRow]


class SwirlReport(Report):
    COLUMNS: ClassVar[tuple[str, ...]] = tuple(SwirlRow.model_fields)

    kind: Literal["swirl"] = "swirl"
    rows: list[SwirlRow]


class LaminateReport(Report):
    COLUMNS: ClassVar[tuple[str, ...]] = tuple(LaminateRow.model_fields)

    kind: Literal["laminate"] = "laminate"
    rows: list[LaminateRow]


class CompactnessReport(Report):
    """Tails are flattened to one ``tail_<M>`` column per threshold in CSV."""

    kind: Literal["compactness"] = "compactness"
    thresholds: list[float]
    equiintegrable: bool
    rows: list[CompactnessRow]

    def columns(self) -> list[str]:
        tails = [f"tail_{m!r}" for m in self.thresholds]
        return ["index", "mass", *tails, "weakstar_step", "cone_violations"]

    def table(self) -> list[dict[str, Any]]:
        out = []
        for row in self.rows:
            entry: dict[str, Any] = {
                "index": row.index,
                "mass": row.mass,
                "weakstar_step": row.weakstar_step,
                "cone_violations": row.cone_violations,
            }
            for m, tail in zip(self.thresholds, row.tails):
                entry[f"tail_{m!r}"] = tail
            out.append(entry)
        return out
