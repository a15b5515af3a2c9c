"""Numerical settings shared by the analysis, symbolic and spectral layers.

Settings live in a YAML file passed explicitly with ``--settings``; nothing is
read from the environment.

Example settings.yaml:
```yaml
rank_tol: 1.0e-10
angle_tol: 1.0e-08
sample_size: 64
seed: 0
per_frequency: 5
refine: true
```
"""

from __future__ import annotations

from pathlib import Path

import yaml
from pydantic import BaseModel, ConfigDict, Field, field_validator


class AnalysisSettings(BaseModel):
    """Tolerances and sampling parameters for frequency-sphere analysis."""

    model_config = ConfigDict(extra="forbid", frozen=True)

    rank_tol: float = Field(
        default=1e-10,
        gt=0.0,
        lt=1.0,
        description="Singular values below rank_tol * sigma_max count as zero",
    )
    angle_tol: float = Field(
        default=1e-8,
        gt=0.0,
        lt=1.0,
        description="Residual threshold when intersecting images or kernels",
    )
    sample_size: int = Field(default=64, description="Sphere points before the axes are appended")
    seed: int = Field(default=0, ge=0, description="Seed for sphere samples and wave-cone mixing")
    per_frequency: int = Field(
        default=5, ge=0, description="Random kernel combinations per sampled frequency"
    )
    refine: bool = Field(default=True, description="Refine rank profiles near rank transitions")

    @field_validator("sample_size")
    @classmethod
    def validate_sample_size(cls, v: int) -> int:
        """Sphere samples need at least a handful of non-axis points."""
        if v < 2:
            raise ValueError("sample_size must be at least 2")
        return v

    @classmethod
    def load(cls, path: Path) -> AnalysisSettings:
        """Load settings from a YAML file.

        Raises:
            FileNotFoundError: If the file doesn't exist
            pydantic.ValidationError: If a field is invalid
        """
        if not path.exists():
            raise FileNotFoundError(f"Settings file not found: {path}")
        with open(path) as f:
            data = yaml.safe_load(f) or {}
        return cls.model_validate(data)

    @classmethod
    def default(cls) -> AnalysisSettings:
        return cls()

    def save(self, path: Path) -> None:
        path.parent.mkdir(parents=True, exist_ok=True)
        with open(path, "w") as f:
            yaml.safe_dump(self.model_dump(mode="json"), f, default_flow_style=False, sort_keys=False)
