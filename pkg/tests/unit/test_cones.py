"""Tests for sphere samples, cone geometry and the sampled operator analysis."""

import json
from pathlib import Path

import numpy as np
import pytest

from wavecone.config import AnalysisSettings
from wavecone.cones import (
    ConeSpec,
    SubspaceSpec,
    analysis_report,
    canceling_check,
    cocanceling_rigidity,
    conformal_subspace,
    ellipticity_distance,
    identity_line,
    image_distance,
    kernel_basis,
    projection_symbol,
    pseudoinverse_symbol,
    rank_profile,
    sphere_sample,
    trace_free_symmetric,
    wave_cone_sample,
)
from wavecone.errors import DimensionError, PreconditionError
from wavecone.operators import builtin, full_symbol_batch, load_operator

FIXTURES = Path(__file__).parent.parent / "fixtures" / "operators"


@pytest.fixture
def sample2():
    return sphere_sample(2, 64, seed=0)


class TestSphereSample:
    """Tests for deterministic sphere samples."""

    def test_axes_are_appended(self):
        """The last 2d rows are +-e_i."""
        sample = sphere_sample(3, 20, seed=1)
        assert len(sample) == 26
        np.testing.assert_allclose(sample.points[-6:-3], np.eye(3))
        np.testing.assert_allclose(sample.points[-3:], -np.eye(3))

    def test_points_are_unit(self):
        """Every point lies on the sphere."""
        for d in (2, 3, 5):
            sample = sphere_sample(d, 32, seed=2)
            np.testing.assert_allclose(np.linalg.norm(sample.points, axis=1), 1.0)

    def test_seeded(self):
        """Same seed, same points; different seed, different points."""
        a = sphere_sample(4, 16, seed=5).points
        np.testing.assert_array_equal(a, sphere_sample(4, 16, seed=5).points)
        assert not np.allclose(a, sphere_sample(4, 16, seed=6).points)

    def test_too_small(self):
        """N must cover the axes."""
        with pytest.raises(DimensionError, match="below 2d"):
            sphere_sample(3, 4)


class TestGeometry:
    """Tests for subspaces and circular cones."""

    def test_subspace_orthonormalizes(self):
        """Spanning rows are replaced by an orthonormal basis."""
        L = SubspaceSpec.span([[1.0, 1.0, 0.0], [0.0, 1.0, 0.0]])
        np.testing.assert_allclose(L.basis @ L.basis.T, np.eye(2), atol=1e-14)
        assert L.distance(np.array([[0.0, 0.0, 2.0]]))[0] == pytest.approx(2.0)

    def test_dependent_rows(self):
        """Linearly dependent rows are rejected."""
        with pytest.raises(DimensionError, match="dependent"):
            SubspaceSpec.span([[1.0, 0.0], [2.0, 0.0]])

    def test_named_subspaces(self):
        """Catalog subspaces have the expected dimensions."""
        assert conformal_subspace().dim == 2
        assert trace_free_symmetric(2).dim == 2
        assert trace_free_symmetric(3).dim == 5
        assert identity_line(3).ambient == 9

    def test_cone_membership(self):
        """The axis is inside; orthogonal vectors are outside."""
        cone = ConeSpec(axis=np.array([1.0, 0.0, 0.0, 1.0]), epsilon=0.05)
        assert cone.slope == pytest.approx(0.1)
        inside = cone.contains(np.array([[2.0, 0.0, 0.0, 2.0], [1.0, 0.05, 0.0, 1.0]]))
        assert inside.tolist() == [True, True]
        assert not cone.contains(np.array([[0.0, 1.0, -1.0, 0.0]]))[0]

    def test_cone_distance(self):
        """Distances inside, past the lateral face and past the apex."""
        cone = ConeSpec(axis=np.array([1.0, 0.0]), epsilon=0.25)
        d = cone.distance(np.array([[1.0, 0.1], [0.0, 1.0], [-1.0, 0.0]]))
        assert d[0] == 0.0
        assert d[1] == pytest.approx(1.0 / np.sqrt(1.0 + 0.25))
        assert d[2] == pytest.approx(1.0)

    def test_axis_must_lie_in_subspace(self):
        """The axis has to be a vector of L."""
        with pytest.raises(ValueError, match="subspace L"):
            ConeSpec(
                axis=np.array([1.0, 0.0]),
                epsilon=0.1,
                subspace=SubspaceSpec.span([[0.0, 1.0]]),
            )

    def test_aperture_range(self):
        """eps lies strictly between 0 and 1."""
        with pytest.raises(ValueError, match="aperture"):
            ConeSpec(axis=np.array([1.0]), epsilon=1.0)


class TestLinalg:
    """Tests for kernels, projections and pseudoinverses at one frequency."""

    def test_divergence_kernel(self):
        """ker div(e1) is the matrices with zero first column."""
        basis = kernel_basis(builtin("divergence_rows", 2), [1.0, 0.0])
        assert basis.shape == (4, 2)
        np.testing.assert_allclose(basis[[0, 2]], 0.0, atol=1e-14)

    def test_zero_frequency(self):
        """xi = 0 has no kernel decomposition."""
        with pytest.raises(PreconditionError):
            kernel_basis(builtin("gradient", 2), [0.0, 0.0])

    def test_projection_is_idempotent(self):
        """pi(xi) is an orthogonal projection annihilating the kernel."""
        op = builtin("curl", 2, m=2)
        pi = projection_symbol(op, [0.6, 0.8])
        np.testing.assert_allclose(pi @ pi, pi, atol=1e-12)
        np.testing.assert_allclose(pi, pi.T, atol=1e-12)
        np.testing.assert_allclose(pi @ np.outer([1.0, 2.0], [0.6, 0.8]).ravel(), 0.0, atol=1e-12)

    def test_pseudoinverse(self):
        """A A^+ A = A for the full symbol."""
        op = builtin("symmetric_gradient", 2)
        xi = np.array([0.3, -1.2])
        full = full_symbol_batch(op, xi)[0]
        pinv = pseudoinverse_symbol(op, xi)
        np.testing.assert_allclose(full @ pinv @ full, full, atol=1e-10)


class TestOperatorProperties:
    """Tests for rank profiles, canceling checks and wave cones."""

    def test_divergence_is_constant_rank_not_canceling(self, sample2):
        """div rows: constant rank, images all of R^d."""
        op = builtin("divergence_rows", 2)
        assert rank_profile(op, sample2).is_constant_rank
        result = canceling_check(op, sample2)
        assert not result.is_canceling
        assert result.intersection_dim == 2

    def test_gradient_is_canceling(self, sample2):
        """The images span(xi) only meet at 0."""
        result = canceling_check(builtin("gradient", 2), sample2)
        assert result.is_canceling
        assert result.history == sorted(result.history, reverse=True)

    def test_laplacian_is_not_canceling(self, sample2):
        """The scalar Laplacian is onto at every xi."""
        assert not canceling_check(builtin("laplacian", 2), sample2).is_canceling

    def test_single_row_is_not_constant_rank(self, sample2):
        """A symbol [xi_1, 0] drops rank on the xi_2 axis."""
        profile = rank_profile(load_operator(FIXTURES / "single_row.json"), sample2)
        assert (profile.min_rank, profile.max_rank) == (0, 1)
        assert not profile.is_constant_rank

    def test_curl_wave_cone_is_rank_one(self):
        """Every sampled kernel element of curl is a rank-one matrix."""
        op = builtin("curl", 2, m=2)
        cone = wave_cone_sample(op, sphere_sample(2, 20, seed=0), per_frequency=3, seed=0)
        directions = cone.directions[:100]
        assert len(directions) == 100
        for v in directions:
            s = np.linalg.svd(v.reshape(2, 2), compute_uv=False)
            assert s[1] <= 1e-10

    def test_elliptic_wave_cone_is_empty(self, sample2):
        """The gradient has trivial kernels."""
        assert wave_cone_sample(builtin("gradient", 2), sample2).is_empty

    def test_ellipticity_distance(self, sample2):
        """Conformal matrices avoid the rank-one cone; e1 (x) e1 does not."""
        op = builtin("curl", 2, m=2)
        away = ellipticity_distance(op, conformal_subspace(), sample2)
        assert away.delta > 0.5
        touching = ellipticity_distance(op, SubspaceSpec.span([[1.0, 0.0, 0.0, 0.0]]), sample2)
        assert touching.delta == 0.0
        assert not touching.elliptic

    def test_elliptic_distance_is_infinite(self, sample2):
        """Elliptic operators have nothing to measure."""
        result = ellipticity_distance(builtin("gradient", 2), SubspaceSpec.span([[1.0]]), sample2)
        assert result.elliptic
        assert result.delta == float("inf")

    def test_subspace_dimension_mismatch(self, sample2):
        """L must live in V."""
        with pytest.raises(DimensionError):
            ellipticity_distance(builtin("gradient", 2), identity_line(2), sample2)

    def test_image_distance_touching(self, sample2):
        """span(e1) is the image of the gradient at xi = e1."""
        result = image_distance(builtin("gradient", 2), SubspaceSpec.span([[1.0, 0.0]]), sample2)
        assert result.delta == pytest.approx(0.0, abs=1e-10)
        assert abs(result.frequency[0]) == pytest.approx(1.0)

    def test_image_distance_transverse(self, sample2):
        """No xi (x) xi is parallel to diag(1, -1); the gap is smallest on the axes."""
        op = builtin("hessian_k", 2, k=2)
        result = image_distance(op, SubspaceSpec.span([[1.0, 0.0, -1.0]]), sample2)
        assert result.delta == pytest.approx(np.sqrt(0.5), abs=1e-8)

    def test_image_distance_lives_in_w(self, sample2):
        """L must live in W."""
        with pytest.raises(DimensionError):
            image_distance(builtin("gradient", 2), SubspaceSpec.span([[1.0]]), sample2)


class TestRigidity:
    """Tests for the cocanceling rigidity certificate."""

    def test_divergence_with_identity_cone(self, sample2):
        """div rows has trivial common kernel, so any cone is rigid."""
        cone = ConeSpec(axis=np.eye(2).ravel(), epsilon=0.05)
        result = cocanceling_rigidity(builtin("divergence_rows", 2), cone, sample2)
        assert result.certificate
        assert result.witness is None

    def test_gradient_any_cone(self, sample2):
        """The gradient kernel is always trivial."""
        cone = ConeSpec(axis=np.array([1.0]), epsilon=0.5)
        assert cocanceling_rigidity(builtin("gradient", 2), cone, sample2).certificate

    def test_single_row_witness(self, sample2):
        """The common kernel span(e2) meets a cone around e2."""
        op = load_operator(FIXTURES / "single_row.json")
        cone = ConeSpec(axis=np.array([0.0, 1.0]), epsilon=0.1)
        result = cocanceling_rigidity(op, cone, sample2)
        assert not result.certificate
        assert result.kernel_intersection_dim == 1
        np.testing.assert_allclose(result.witness, [0.0, 1.0], atol=1e-10)

    def test_single_row_cone_away_from_kernel(self, sample2):
        """A narrow cone around e1 misses span(e2)."""
        op = load_operator(FIXTURES / "single_row.json")
        cone = ConeSpec(axis=np.array([1.0, 0.0]), epsilon=0.1)
        assert cocanceling_rigidity(op, cone, sample2).certificate


class TestAnalysisReport:
    """Tests for the JSON analysis report."""

    def test_divergence_report(self):
        """Report fields follow the sampled analysis."""
        report = analysis_report(
            builtin("divergence_rows", 2),
            subspaces=[identity_line(2)],
            settings=AnalysisSettings(sample_size=32),
            include_wave_cone=True,
        )
        assert report.is_constant_rank
        assert not report.is_canceling
        assert report.canceling_dim == 2
        assert report.cocanceling_dim == 0
        assert report.delta_L[0].delta > 0
        assert report.wave_cone.size > 0
        assert report.labels == ["sampled"]

    def test_report_is_deterministic(self):
        """Same settings give byte-identical JSON."""
        op = builtin("curl", 2, m=2)
        first = analysis_report(op, include_wave_cone=True).to_json()
        second = analysis_report(op, include_wave_cone=True).to_json()
        assert first == second
        assert json.loads(first)["operator_hash"]
