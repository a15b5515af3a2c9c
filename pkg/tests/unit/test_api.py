"""Unit tests for wavecone.api module."""

import json
import tempfile
from pathlib import Path

import numpy as np
import pytest

from wavecone import analyze, annihilate, run_experiment, solve
from wavecone.cones import ConeSpec, identity_line
from wavecone.errors import NotEllipticError, PerturbationDivergedError, SpecError
from wavecone.spectral import read_field

FIXTURES = Path(__file__).parent.parent / "fixtures"
EXPERIMENTS = FIXTURES / "experiments"


class TestAnalyze:
    """Tests for analyze()."""

    def test_divergence_rows(self):
        """Row divergence is constant rank but not canceling."""
        report = analyze("builtin:divergence_rows?d=2")
        assert report.is_constant_rank
        assert not report.is_canceling
        assert report.dimV == 4
        assert report.wave_cone is not None
        assert report.wave_cone.size > 0

    def test_subspaces_and_cone(self):
        """Subspace distances and the cocanceling certificate are embedded."""
        identity = [1.0, 0.0, 0.0, 1.0]
        report = analyze(
            "builtin:divergence_rows?d=2",
            subspaces=[identity_line(2)],
            cone=ConeSpec(axis=np.array(identity), epsilon=0.05),
        )
        (entry,) = report.delta_L
        assert entry.label == "span(I_2)"
        assert entry.delta > 0
        assert report.cocanceling is not None

    def test_operator_file(self):
        """Paths load operator spec files."""
        report = analyze(FIXTURES / "operators" / "gradient_d2.json")
        assert report.is_canceling
        assert report.k == 1

    def test_unknown_builtin(self):
        """Unknown builtins are spec errors."""
        with pytest.raises(SpecError):
            analyze("builtin:hessian_squared?d=2")


class TestAnnihilate:
    """Tests for annihilate()."""

    def test_gradient(self):
        """The annihilator of the gradient is exact."""
        op_a, check = annihilate("builtin:gradient?d=2")
        assert op_a.d == 2
        assert op_a.dim_v == 2
        assert check.symbolic_zero
        assert check.is_exact

    def test_not_elliptic(self):
        """Row divergence has no elliptic annihilator construction."""
        with pytest.raises(NotEllipticError):
            annihilate("builtin:divergence_rows?d=2")


class TestSolve:
    """Tests for solve()."""

    def test_direct_solve(self):
        """Without a perturbation the spectral solve is exact."""
        result = solve("builtin:gradient?d=2", n=32, seed=1)
        assert result.converged
        assert result.iterations == 1
        assert result.residual <= 1e-10

    def test_seeded(self):
        """The right-hand side depends only on the seed."""
        first = solve("builtin:gradient?d=2", n=16, seed=4)
        second = solve("builtin:gradient?d=2", n=16, seed=4)
        np.testing.assert_array_equal(first.f.values, second.f.values)
        np.testing.assert_array_equal(first.u.values, second.u.values)

    def test_small_perturbation(self):
        """A small polyharmonic perturbation converges."""
        result = solve("builtin:gradient?d=2", n=32, perturbation=0.1)
        assert result.converged
        assert 0.0 < result.contraction < 1.0
        assert result.residual <= 1e-6

    def test_large_perturbation(self):
        """A perturbation larger than Delta_B diverges."""
        with pytest.raises(PerturbationDivergedError) as exc_info:
            solve("builtin:gradient?d=2", n=32, perturbation=4.0)
        assert exc_info.value.contraction > 1.0


class TestRunExperiment:
    """Tests for run_experiment()."""

    def test_higher_integrability(self):
        """The JSON fixture writes a JSON and a CSV report."""
        with tempfile.TemporaryDirectory() as tmpdir:
            out = Path(tmpdir)
            written = run_experiment(EXPERIMENTS / "higher_integrability.json", out)
            assert [p.name for p in written] == [
                "higher_integrability.json",
                "higher_integrability.csv",
            ]
            data = json.loads(written[0].read_text())
        assert data["metadata"]["seed"] == 7
        assert len(data["rows"]) == 2

    def test_sweep_writes_one_report_per_exponent(self):
        """A p-sweep gets per-exponent file stems."""
        with tempfile.TemporaryDirectory() as tmpdir:
            written = run_experiment(
                EXPERIMENTS / "higher_integrability.json",
                Path(tmpdir),
                formats=("csv",),
                overrides={"sweep": ["1", "3/2"]},
            )
            names = [p.name for p in written]
        assert names == ["higher_integrability_p1.csv", "higher_integrability_p3-2.csv"]

    def test_swirl_fields_exported(self):
        """A swirl config with a grid also writes the sampled fields."""
        with tempfile.TemporaryDirectory() as tmpdir:
            written = run_experiment(
                EXPERIMENTS / "swirl.yaml",
                Path(tmpdir),
                formats=("json",),
                overrides={"eps": [1e-2], "grid": 16},
            )
            names = [p.name for p in written]
            field = read_field(Path(tmpdir) / "swirl_first_eps0.01.bin")
        assert names[0] == "swirl.json"
        assert "swirl_hessian_eps0.01.bin" in names
        assert len(names) == 5
        assert field.dim == 4
        assert field.grid.n == 16
