"""Tests for discretized measures, sub-boxes, mollification and polar diagnostics."""

import numpy as np
import pytest

from wavecone.cones import ConeSpec
from wavecone.errors import DimensionError, ResolutionError
from wavecone.lab.measures import DiscreteMeasure, SubBox, mollify, quintic_step
from wavecone.lab.polar import polar_diagnostics
from wavecone.spectral import TorusField, TorusGrid, lq_norm

IDENTITY = [1.0, 0.0, 0.0, 1.0]


@pytest.fixture
def grid():
    return TorusGrid(d=2, n=32)


class TestSubBox:
    """Tests for the box Omega' and its cutoff."""

    def test_quintic_step(self):
        """S(0) = 0, S(1/2) = 1/2, S(1) = 1, clipped outside."""
        values = quintic_step(np.array([-1.0, 0.0, 0.5, 1.0, 2.0]))
        np.testing.assert_allclose(values, [0.0, 0.0, 0.5, 1.0, 1.0])

    def test_centered_mask(self):
        """The side-1/2 box holds 5 of 8 grid points per axis."""
        box = SubBox.centered(2, 0.5)
        assert box.lower == (0.25, 0.25)
        assert box.mask(TorusGrid(d=2, n=8)).sum() == 25

    def test_cutoff(self):
        """chi = 1 on the box and 0 outside the 3/4 box."""
        grid = TorusGrid(d=2, n=32)
        box = SubBox.centered(2, 0.5)
        chi = box.cutoff(grid)
        np.testing.assert_allclose(chi[box.mask(grid)], 1.0)
        assert chi[0, 0] == 0.0
        assert chi[2, 16] == 0.0

    def test_invalid_sides(self):
        """Box sides must be nonempty intervals of [0, 1]."""
        with pytest.raises(ValueError, match="invalid box side"):
            SubBox(lower=(0.5,), upper=(0.25,))
        with pytest.raises(ValueError):
            SubBox.centered(2, 1.0)


class TestDiscreteMeasure:
    """Tests for measure construction and mollification."""

    def test_hyperplane_total_variation(self):
        """Surface measure on a line of the unit torus has mass |weight|."""
        mu = DiscreteMeasure.hyperplane(TorusGrid(d=2, n=8), 0, 0.5, [3.0, 4.0])
        assert len(mu.atoms) == 8
        assert mu.total_variation() == pytest.approx(5.0)

    def test_density_shape_checked(self, grid):
        """Densities are (dim, *grid.shape)."""
        with pytest.raises(DimensionError):
            DiscreteMeasure(grid=grid, dim=2, density=np.zeros((1, 32, 32)))

    def test_polar_values(self, grid):
        """A constant ball has a single polar direction."""
        mu = DiscreteMeasure.ball(grid, [0.5, 0.5], 0.2, [2.0, 0.0, 0.0, 2.0])
        polars = mu.polar_values()
        expected = np.array(IDENTITY) / np.sqrt(2.0)
        np.testing.assert_allclose(polars, np.tile(expected, (len(polars), 1)))

    def test_mollify_preserves_mass(self, grid):
        """Atoms and densities keep their vector mass; |mu_t| does not grow."""
        mu = DiscreteMeasure(
            grid=grid,
            dim=2,
            density=DiscreteMeasure.ball(grid, [0.3, 0.3], 0.1, [1.0, -1.0]).density,
            atoms=DiscreteMeasure.point(grid, [0.71, 0.52], [0.5, 2.0]).atoms,
        )
        smoothed = mollify(mu, 0.125)
        np.testing.assert_allclose(smoothed.integral(), mu.mass(), atol=1e-12)
        assert lq_norm(smoothed, 1.0) <= mu.total_variation() + 1e-12

    def test_mollify_stays_in_cone(self, grid):
        """Convexity keeps mu_t inside a cone holding every polar of mu."""
        mu = DiscreteMeasure.ball(grid, [0.5, 0.5], 0.2, IDENTITY)
        cone = ConeSpec(axis=np.array(IDENTITY), epsilon=0.05)
        smoothed = mollify(mu, 0.0625, cone=cone)
        assert smoothed.real

    def test_mollifier_scale_range(self, grid):
        """t must resolve two cells and stay below 1/2."""
        mu = DiscreteMeasure.point(grid, [0.5, 0.5], [1.0])
        with pytest.raises(ResolutionError):
            mollify(mu, 0.05)
        with pytest.raises(ResolutionError):
            mollify(mu, 0.5)

    def test_resample_keeps_mass(self, grid):
        """Spectral resampling preserves the mean."""
        mu = DiscreteMeasure.ball(grid, [0.5, 0.5], 0.25, [1.0])
        fine = mu.resample(TorusGrid(d=2, n=64))
        np.testing.assert_allclose(fine.mass(), mu.mass(), atol=1e-12)


class TestPolarDiagnostics:
    """Tests for pointwise cone diagnostics."""

    def test_field_on_axis(self, grid):
        """Values along the axis have no distance and no transverse part."""
        f = TorusField.constant(grid, IDENTITY)
        cone = ConeSpec(axis=np.array(IDENTITY), epsilon=0.05)
        result = polar_diagnostics(f, cone)
        assert result.max_dist == pytest.approx(0.0, abs=1e-12)
        assert result.violations == 0
        assert result.m_inf == pytest.approx(0.0, abs=1e-12)
        assert result.points == grid.size

    def test_rank_one_field(self, grid):
        """e1 (x) e1 sits at 45 degrees from the identity line."""
        f = TorusField.constant(grid, [1.0, 0.0, 0.0, 0.0])
        cone = ConeSpec(axis=np.array(IDENTITY), epsilon=0.05)
        result = polar_diagnostics(f, cone)
        assert result.violations == grid.size
        assert result.m_inf == pytest.approx(1.0)
        assert result.max_dist > 0.5
        assert result.l1_dist == pytest.approx(result.max_dist)

    def test_zero_field(self, grid):
        """Zero values carry no polar."""
        cone = ConeSpec(axis=np.array([1.0, 0.0]), epsilon=0.1)
        assert polar_diagnostics(TorusField.zeros(grid, 2), cone).points == 0

    def test_dimension_mismatch(self, grid):
        """Field and cone must share R^dim."""
        cone = ConeSpec(axis=np.array([1.0, 0.0]), epsilon=0.1)
        with pytest.raises(DimensionError):
            polar_diagnostics(TorusField.zeros(grid, 3), cone)
