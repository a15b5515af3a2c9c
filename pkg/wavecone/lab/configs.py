"""Experiment configuration files (YAML or JSON).

The top-level ``kind`` selects the experiment. Measures and sequences are
nested models discriminated by ``type``.

Example higher_integrability.yaml:
```yaml
kind: higher_integrability
operator: builtin:divergence_rows?d=2
measure:
  type: ball
  center: [0.5, 0.5]
  radius: 0.2
  value: [1, 0, 0, 1]
cone:
  axis: [1, 0, 0, 1]
  epsilon: 0.05
p: "2"
scales: ["1/8", "1/16", "1/32", "1/64"]
grid: 256
force: true
seed: 0
```
"""

from __future__ import annotations

from fractions import Fraction
from pathlib import Path
from typing import Annotated, Literal

import numpy as np
import yaml
from pydantic import BaseModel, ConfigDict, Field, TypeAdapter, field_validator

from wavecone.cones.geometry import ConeSpec, SubspaceSpec
from wavecone.errors import SpecError
from wavecone.lab.measures import DiscreteMeasure
from wavecone.operators.spec import parse_rational
from wavecone.spectral.grid import TorusGrid


class _Strict(BaseModel):
    model_config = ConfigDict(extra="forbid")


def _check_rational(v: str | int | float) -> str:
    try:
        value = parse_rational(v)
    except (ValueError, ZeroDivisionError) as e:
        raise ValueError(f"not a rational number: {v!r}") from e
    return str(value)


class BallMeasure(_Strict):
    """value * indicator of a ball."""

    type: Literal["ball"] = "ball"
    center: list[float]
    radius: float = Field(gt=0.0, lt=0.5)
    value: list[float] = Field(min_length=1)

    def build(self, grid: TorusGrid) -> DiscreteMeasure:
        return DiscreteMeasure.ball(grid, self.center, self.radius, self.value)


class HyperplaneMeasure(_Strict):
    """weight * surface measure on {x_axis = offset}."""

    type: Literal["hyperplane"] = "hyperplane"
    axis: int = Field(default=0, ge=0)
    offset: float = Field(default=0.5, ge=0.0, lt=1.0)
    weight: list[float] = Field(min_length=1)

    def build(self, grid: TorusGrid) -> DiscreteMeasure:
        return DiscreteMeasure.hyperplane(grid, self.axis, self.offset, self.weight)


class AtomMeasure(_Strict):
    type: Literal["atom"] = "atom"
    location: list[float]
    weight: list[float] = Field(min_length=1)

    def build(self, grid: TorusGrid) -> DiscreteMeasure:
        return DiscreteMeasure.point(grid, self.location, self.weight)


class ZeroMeasure(_Strict):
    type: Literal["zero"] = "zero"
    dim: int = Field(ge=1)

    def build(self, grid: TorusGrid) -> DiscreteMeasure:
        return DiscreteMeasure.zero(grid, self.dim)


MeasureConfig = Annotated[
    BallMeasure | HyperplaneMeasure | AtomMeasure | ZeroMeasure, Field(discriminator="type")
]


class SubspaceConfig(_Strict):
    """Subspace L of V given by spanning rows, as passed to ``analyze --subspace``."""

    basis: list[list[float]] = Field(min_length=1)
    label: str = ""

    def build(self) -> SubspaceSpec:
        return SubspaceSpec.span(self.basis, label=self.label)


class ConeConfig(_Strict):
    """Circular cone of aperture epsilon around ``axis``; L defaults to span(axis)."""

    axis: list[float] = Field(min_length=1)
    epsilon: float = Field(gt=0.0, lt=1.0)
    subspace: list[list[float]] | None = Field(
        default=None, description="Rows spanning L; must contain the axis"
    )

    def build(self) -> ConeSpec:
        subspace = SubspaceSpec.span(self.subspace, label="L") if self.subspace else None
        return ConeSpec(axis=np.asarray(self.axis), epsilon=self.epsilon, subspace=subspace)


class _ExperimentBase(_Strict):
    seed: int = Field(default=0, ge=0, description="Echoed into every report")
    box_side: float = Field(default=0.5, gt=0.0, lt=1.0, description="Side of the centred box")


class HigherIntegrabilityConfig(_ExperimentBase):
    kind: Literal["higher_integrability"] = "higher_integrability"
    operator: str
    measure: MeasureConfig
    cone: ConeConfig
    p: str = "2"
    sweep: list[str] | None = Field(default=None, description="Exponents for a p-sweep")
    scales: list[str] = Field(default_factory=lambda: ["1/8", "1/16", "1/32", "1/64"])
    grid: int = 256
    force: bool = False

    @field_validator("p", mode="before")
    @classmethod
    def validate_p(cls, v: str | int | float) -> str:
        return _check_rational(v)

    @field_validator("sweep", mode="before")
    @classmethod
    def validate_sweep(cls, v: list | None) -> list[str] | None:
        return None if v is None else [_check_rational(p) for p in v]

    @field_validator("scales", mode="before")
    @classmethod
    def validate_scales(cls, v: list) -> list[str]:
        if not v:
            raise ValueError("at least one scale is required")
        out = [_check_rational(t) for t in v]
        if any(not 0 < Fraction(t) < Fraction(1, 2) for t in out):
            raise ValueError("scales must lie in (0, 1/2)")
        return out

    def scale_values(self) -> list[float]:
        return [float(Fraction(t)) for t in self.scales]


class LocalCancelingConfig(_ExperimentBase):
    kind: Literal["local_canceling"] = "local_canceling"
    operator: str
    measure: MeasureConfig
    resolutions: list[int] = Field(default_factory=lambda: [64, 128], min_length=1)
    t_cells: int = Field(default=4, ge=2, description="Mollifier radius in grid cells")


class SwirlConfig(_ExperimentBase):
    kind: Literal["swirl"] = "swirl"
    eps: list[float] = Field(default_factory=lambda: [1e-2, 1e-3, 1e-4], min_length=1)
    grid: int | None = Field(default=None, description="Export sampled fields on this grid")

    @field_validator("eps")
    @classmethod
    def validate_eps(cls, v: list[float]) -> list[float]:
        if any(not 0.0 < e < 1.0 for e in v):
            raise ValueError("every eps must lie in (0, 1)")
        return v


class _LaminateFields(_Strict):
    operator: str
    xi: list[int]
    P: list[float]
    B0: list[float]
    delta: float = 1.0
    js: list[int] = Field(default_factory=lambda: [4, 8, 16, 32], min_length=1)


class LaminateSequence(_LaminateFields):
    type: Literal["laminate"] = "laminate"


class MollifiedSequence(_Strict):
    type: Literal["mollified"] = "mollified"
    d: int = Field(default=2, ge=1)
    measure: MeasureConfig
    scales: list[str] = Field(default_factory=lambda: ["1/8", "1/16", "1/32"], min_length=1)

    @field_validator("scales", mode="before")
    @classmethod
    def validate_scales(cls, v: list) -> list[str]:
        return [_check_rational(t) for t in v]


class LaminateConfig(_ExperimentBase, _LaminateFields):
    kind: Literal["laminate"] = "laminate"
    grid: int = 256


class CompactnessConfig(_ExperimentBase):
    kind: Literal["compactness"] = "compactness"
    sequence: Annotated[LaminateSequence | MollifiedSequence, Field(discriminator="type")]
    grid: int = 128
    thresholds: list[float] = Field(default_factory=lambda: [1.0, 10.0, 100.0], min_length=1)
    q: float = Field(default=1.0, ge=1.0)
    cone: ConeConfig | None = None


ExperimentConfig = Annotated[
    HigherIntegrabilityConfig
    | LocalCancelingConfig
    | SwirlConfig
    | LaminateConfig
    | CompactnessConfig,
    Field(discriminator="kind"),
]

_ADAPTER: TypeAdapter[ExperimentConfig] = TypeAdapter(ExperimentConfig)


def parse_experiment_config(data: dict) -> ExperimentConfig:
    """Validate a decoded config mapping.

    Raises:
        pydantic.ValidationError: If the mapping does not describe an experiment
    """
    return _ADAPTER.validate_python(data)


def _read_yaml(path: Path, what: str) -> dict:
    if not path.exists():
        raise FileNotFoundError(f"{what} not found: {path}")
    with open(path) as f:
        data = yaml.safe_load(f) or {}
    if not isinstance(data, dict):
        raise SpecError(f"{path}: expected a mapping at the top level")
    return data


def load_experiment_config(path: Path, overrides: dict | None = None) -> ExperimentConfig:
    """Load an experiment config; JSON is read through the YAML loader.

    ``overrides`` replaces top-level keys before validation (CLI flags).

    Raises:
        FileNotFoundError: If the file doesn't exist
        yaml.YAMLError: If the file is not valid YAML/JSON
        pydantic.ValidationError: If a field is invalid
    """
    data = _read_yaml(path, "Experiment config")
    data.update(overrides or {})
    return parse_experiment_config(data)


def load_cone_config(path: Path) -> ConeConfig:
    return ConeConfig.model_validate(_read_yaml(path, "Cone file"))


def load_subspace_config(path: Path) -> SubspaceConfig:
    return SubspaceConfig.model_validate(_read_yaml(path, "Subspace file"))
