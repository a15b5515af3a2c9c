"""Tests for AnalysisSettings."""

import tempfile
from pathlib import Path

import pytest
from pydantic import ValidationError

from wavecone.config import AnalysisSettings

FIXTURES = Path(__file__).parent.parent / "fixtures"


class TestAnalysisSettings:
    """Tests for the numerical settings model."""

    def test_default_values(self):
        """Defaults match the documented tolerances."""
        settings = AnalysisSettings.default()
        assert settings.rank_tol == 1e-10
        assert settings.angle_tol == 1e-8
        assert settings.sample_size == 64
        assert settings.seed == 0
        assert settings.refine

    def test_load_yaml(self):
        """Settings files override the defaults."""
        settings = AnalysisSettings.load(FIXTURES / "settings_small.yaml")
        assert settings.sample_size == 24
        assert settings.seed == 3
        assert not settings.refine

    def test_empty_file_gives_defaults(self):
        """An empty YAML document is the default settings."""
        with tempfile.TemporaryDirectory() as tmpdir:
            path = Path(tmpdir) / "settings.yaml"
            path.write_text("")
            assert AnalysisSettings.load(path) == AnalysisSettings.default()

    def test_missing_file(self):
        """Missing settings are FileNotFoundError."""
        with pytest.raises(FileNotFoundError, match="not found"):
            AnalysisSettings.load(FIXTURES / "nope.yaml")

    def test_save_and_reload(self):
        """Saved settings load back unchanged."""
        settings = AnalysisSettings(sample_size=16, seed=5)
        with tempfile.TemporaryDirectory() as tmpdir:
            path = Path(tmpdir) / "nested" / "settings.yaml"
            settings.save(path)
            assert AnalysisSettings.load(path) == settings

    @pytest.mark.parametrize(
        "field,value",
        [("rank_tol", 0.0), ("angle_tol", 1.5), ("sample_size", 1), ("seed", -1)],
    )
    def test_rejects_out_of_range(self, field, value):
        """Tolerances live in (0, 1) and samples need at least two points."""
        with pytest.raises(ValidationError):
            AnalysisSettings(**{field: value})

    def test_rejects_unknown_keys(self):
        """Typos in settings files are errors."""
        with pytest.raises(ValidationError):
            AnalysisSettings.model_validate({"rank_tolerance": 1e-6})

    def test_frozen(self):
        """Settings are immutable once built."""
        settings = AnalysisSettings.default()
        with pytest.raises(ValidationError):
            settings.seed = 2
