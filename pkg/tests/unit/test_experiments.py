"""Tests for the higher-integrability, local-canceling and counterexample experiments."""

from pathlib import Path

import numpy as np
import pytest

from wavecone.cones import ConeSpec
from wavecone.errors import DimensionError, ExponentRangeError, NotCancelingError
from wavecone.lab.configs import load_experiment_config
from wavecone.lab.experiments import (
    check_local_canceling_hypotheses,
    higher_integrability_experiment,
    local_canceling_experiment,
    p_sweep,
    run_config,
)
from wavecone.lab.ladder import RunMode
from wavecone.lab.measures import DiscreteMeasure
from wavecone.lab.report import LaminateReport, SwirlReport
from wavecone.operators import builtin, spec_hash
from wavecone.spectral import TorusGrid

EXPERIMENTS = Path(__file__).parent.parent / "fixtures" / "experiments"
IDENTITY = [1.0, 0.0, 0.0, 1.0]
SCALES = [1 / 8, 1 / 16, 1 / 32, 1 / 64]


def identity_ball(n):
    return DiscreteMeasure.ball(TorusGrid(d=2, n=n), [0.5, 0.5], 0.2, IDENTITY)


def identity_cone():
    return ConeSpec(axis=np.array(IDENTITY), epsilon=0.05)


class TestHigherIntegrability:
    """Tests for the ratio table across mollification scales."""

    def test_small_run(self):
        """Rows follow the scales and metadata echoes the inputs."""
        op = builtin("divergence_rows", 2)
        report = higher_integrability_experiment(
            op, identity_ball(64), identity_cone(), "2", [1 / 8, 1 / 16], force=True, seed=7
        )
        assert [row.scale for row in report.rows] == [0.125, 0.0625]
        assert report.mode is RunMode.EXPLORATORY
        assert report.metadata["seed"] == 7
        assert report.metadata["operator_hash"] == spec_hash(op)
        assert report.metadata["ladder_flag"] is None
        assert report.metadata["is_a_free"] is False
        for row in report.rows:
            assert row.cone_max_dist <= 1e-9
            assert row.ratio == pytest.approx(row.lp_norm / (row.tv_mu + row.tv_sigma))

    def test_threads_keep_order(self):
        """Worker threads give the same table as the serial run."""
        op = builtin("divergence_rows", 2)
        args = (op, identity_ball(64), identity_cone(), "3/2", [1 / 8, 1 / 16, 1 / 32])
        serial = higher_integrability_experiment(*args)
        threaded = higher_integrability_experiment(*args, workers=3)
        assert serial.to_json() == threaded.to_json()

    def test_exponent_outside_window(self):
        """Without force, p must pass the ladder."""
        with pytest.raises(ExponentRangeError):
            higher_integrability_experiment(
                builtin("divergence_rows", 2), identity_ball(64), identity_cone(), 3, [1 / 8]
            )

    def test_endpoint_needs_canceling_operator(self):
        """Row divergence is not canceling, so p = d/(d-k) is refused without force."""
        with pytest.raises(ExponentRangeError, match="limiting endpoint"):
            higher_integrability_experiment(
                builtin("divergence_rows", 2), identity_ball(64), identity_cone(), "2", [1 / 8]
            )

    def test_endpoint_for_canceling_operator(self):
        """The gradient is canceling and of constant rank, so p = 2 runs as limiting."""
        measure = DiscreteMeasure.ball(TorusGrid(d=2, n=64), [0.5, 0.5], 0.2, [1.0])
        cone = ConeSpec(axis=np.array([1.0]), epsilon=0.05)
        report = higher_integrability_experiment(
            builtin("gradient", 2), measure, cone, "2", [1 / 8]
        )
        assert report.mode is RunMode.LIMITING
        assert report.metadata["ladder_flag"] == "limiting"
        assert report.metadata["ladder_q"] == "2"

    def test_a_free_run_inside_window(self):
        """A-free runs inside the window keep the theorem label."""
        report = higher_integrability_experiment(
            builtin("divergence_rows", 2),
            DiscreteMeasure.zero(TorusGrid(d=2, n=32), 4),
            identity_cone(),
            "3/2",
            [1 / 8],
        )
        assert report.metadata["is_a_free"] is True
        assert report.mode is RunMode.THEOREM

    def test_cone_must_live_in_v(self):
        """The cone and the operator domain share R^dimV."""
        cone = ConeSpec(axis=np.array([1.0, 0.0]), epsilon=0.05)
        with pytest.raises(DimensionError):
            higher_integrability_experiment(
                builtin("divergence_rows", 2), identity_ball(64), cone, 1, [1 / 8]
            )

    def test_p_sweep_labels(self):
        """Each exponent gets its own forced report."""
        reports = p_sweep(
            builtin("divergence_rows", 2),
            identity_ball(64),
            identity_cone(),
            ["1", "3/2", "3"],
            [1 / 8, 1 / 16],
        )
        assert [r.p for r in reports] == ["1", "3/2", "3"]
        assert [r.mode for r in reports] == [
            RunMode.THEOREM,
            RunMode.THEOREM,
            RunMode.EXPLORATORY,
        ]
        assert reports[0].metadata["ladder_flag"] == "boundary"
        assert reports[2].metadata["ladder_q"] is None

    @pytest.mark.slow
    def test_cone_constraint_against_rank_one_concentration(self):
        """Constrained ratios stay flat while the rank-one control grows like t^(-1/2)."""
        constrained = higher_integrability_experiment(
            builtin("divergence_rows", 2), identity_ball(256), identity_cone(), "2", SCALES,
            force=True,
        )
        weight = [1.0, 0.0, 0.0, 0.0]
        control = higher_integrability_experiment(
            builtin("curl", 2, m=2),
            DiscreteMeasure.hyperplane(TorusGrid(d=2, n=256), 0, 0.5, weight),
            ConeSpec(axis=np.array(weight), epsilon=0.05),
            "2",
            SCALES,
            force=True,
        )
        flat = constrained.ratios
        assert max(flat) <= 2.0 * min(flat)
        assert control.mode is RunMode.A_FREE_EXTENDED
        growth = control.ratios
        for coarse, fine in zip(growth, growth[1:]):
            assert fine >= 1.3 * coarse
        assert growth[-1] >= 2.5 * growth[0]
        assert growth[-1] >= 4.0 * flat[-1]


class TestLocalCanceling:
    """Tests for the local canceling estimate."""

    def test_gradient_point_mass(self):
        """The dual-norm ratio is stable under refinement."""
        measure = DiscreteMeasure.point(TorusGrid(d=2, n=64), [0.5, 0.5], [1.0])
        report = local_canceling_experiment(builtin("gradient", 2), measure, resolutions=(64, 128))
        coarse, fine = (row.ratio for row in report.rows)
        assert [row.n for row in report.rows] == [64, 128]
        assert abs(fine - coarse) <= 0.25 * coarse
        assert report.metadata["q"] == 2.0

    @pytest.mark.parametrize(
        "name,match",
        [("divergence_rows", "not canceling"), ("laplacian", "order k=2")],
    )
    def test_hypothesis_gates(self, name, match):
        """Non-canceling operators and k >= d are refused."""
        with pytest.raises(NotCancelingError, match=match):
            check_local_canceling_hypotheses(builtin(name, 2))


class TestRunConfig:
    """Tests for dispatching configs to experiments."""

    def test_swirl(self):
        """Swirl configs produce one row per eps."""
        (report,) = run_config(load_experiment_config(EXPERIMENTS / "swirl.yaml"))
        assert isinstance(report, SwirlReport)
        assert [row.epsilon for row in report.rows] == [1e-2, 1e-3]

    def test_laminate(self):
        """Laminate configs report the decay rate."""
        path = EXPERIMENTS / "laminate.yaml"
        (report,) = run_config(load_experiment_config(path), base_dir=path.parent)
        assert isinstance(report, LaminateReport)
        assert report.metadata["seed"] == 3
        assert report.metadata["pairing_decay_rate"] > 0.8

    def test_relative_operator_path(self):
        """Operator paths resolve against the config directory."""
        path = EXPERIMENTS / "compactness.yaml"
        (report,) = run_config(load_experiment_config(path), base_dir=path.parent)
        assert report.equiintegrable
        assert [row.index for row in report.rows] == [0, 1]
        assert report.metadata["js"] == [4, 8]

    def test_local_canceling_gate(self):
        """The divergence fixture fails the canceling gate."""
        config = load_experiment_config(EXPERIMENTS / "local_canceling_divergence.yaml")
        with pytest.raises(NotCancelingError):
            run_config(config)
