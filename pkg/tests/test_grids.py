"""Axis and phase-space grid construction, spectral axes, and unit scaling."""

import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from beamphase import (
    AxisGrid,
    GridError,
    PhaseGrid,
    ScaleContext,
    from_scaled,
    make_axis_grid,
    to_scaled,
)


class TestAxisGrid:
    def test_unit_spacing_points(self):
        grid = AxisGrid(8, 8.0, 0.0)
        assert grid.spacing == 1.0
        np.testing.assert_array_equal(grid.points(), np.arange(-4.0, 4.0))

    def test_offset_center_points(self):
        grid = AxisGrid(16, 1.0, 0.5)
        assert grid.spacing == 0.0625
        points = grid.points()
        assert points[0] == 0.0
        assert points[-1] == pytest.approx(0.9375)

    def test_factory_matches_constructor(self):
        assert make_axis_grid(32, 4.0, 1.0) == AxisGrid(32, 4.0, 1.0)

    @pytest.mark.parametrize("n", [12, 0, -8, 7, 4])
    def test_invalid_point_count(self, n):
        with pytest.raises(GridError):
            AxisGrid(n, 1.0)

    @pytest.mark.parametrize("length", [0.0, -1.0, math.inf, math.nan])
    def test_invalid_length(self, length):
        with pytest.raises(GridError):
            AxisGrid(8, length)

    def test_invalid_center(self):
        with pytest.raises(GridError):
            AxisGrid(8, 1.0, math.inf)

    def test_frequencies_are_spectral_axis(self):
        grid = AxisGrid(64, 5.0)
        freqs = grid.frequencies()
        expected = 2.0 * math.pi * np.fft.fftfreq(64, d=grid.spacing)
        np.testing.assert_allclose(freqs, expected, rtol=0, atol=1e-15)
        spacing = np.diff(np.sort(freqs))
        np.testing.assert_allclose(spacing, 2.0 * math.pi / 5.0, rtol=1e-12)

    def test_points_span_centered_interval(self):
        grid = AxisGrid(128, 20.0, -3.0)
        points = grid.points()
        assert points[0] == pytest.approx(-3.0 - 10.0)
        assert points[-1] == pytest.approx(-3.0 + 10.0 - grid.spacing)
        np.testing.assert_allclose(np.diff(points), grid.spacing, rtol=1e-14)


class TestPhaseGrid:
    def test_shape_and_cell_area(self):
        pg = PhaseGrid(AxisGrid(16, 8.0), AxisGrid(8, 2.0))
        assert pg.shape == (16, 8)
        assert pg.cell_area == pytest.approx(0.5 * 0.25)

    def test_meshes_broadcast_to_grid(self):
        pg = PhaseGrid(AxisGrid(16, 8.0), AxisGrid(8, 2.0))
        xm, pm = pg.meshes()
        assert np.broadcast_shapes(xm.shape, pm.shape) == pg.shape
        np.testing.assert_array_equal(xm.ravel(), pg.x_axis.points())
        np.testing.assert_array_equal(pm.ravel(), pg.p_axis.points())

    def test_conjugate_spacing(self):
        pg = PhaseGrid(AxisGrid(32, 4.0), AxisGrid(32, 6.0))
        for axis in (pg.x_axis, pg.p_axis):
            sorted_freqs = np.sort(axis.frequencies())
            np.testing.assert_allclose(
                np.diff(sorted_freqs), 2.0 * math.pi / axis.length, rtol=1e-12
            )


class TestScaling:
    def test_halving_by_two_sigma(self):
        ctx = ScaleContext(sigma0=1.0, epsilon=0.1)
        assert to_scaled(2.0, ctx) == 1.0
        assert to_scaled(0.0, ctx) == 0.0

    def test_round_trip_exact(self):
        ctx = ScaleContext(sigma0=0.8, epsilon=0.1)
        assert from_scaled(to_scaled(0.37, ctx), ctx) == 0.37

    def test_round_trip_bulk_random(self):
        rng = np.random.default_rng(42)
        values = rng.standard_normal(1_000_000) * 10.0
        ctx = ScaleContext(sigma0=1.7, epsilon=0.05)
        back = from_scaled(to_scaled(values, ctx), ctx)
        np.testing.assert_allclose(back, values, rtol=1e-15, atol=1e-300)

    @given(
        value=st.floats(-1e6, 1e6),
        sigma0=st.floats(1e-3, 1e3),
    )
    def test_round_trip_property(self, value, sigma0):
        ctx = ScaleContext(sigma0=sigma0, epsilon=0.1)
        back = from_scaled(to_scaled(value, ctx), ctx)
        assert back == pytest.approx(value, rel=1e-12, abs=1e-12)

    def test_eta_identity(self):
        ctx = ScaleContext(sigma0=2.0, epsilon=0.2)
        assert ctx.eta == 0.05

    @pytest.mark.parametrize("sigma0,epsilon", [(0.0, 0.1), (-1.0, 0.1), (1.0, 0.0), (1.0, -0.5)])
    def test_invalid_context(self, sigma0, epsilon):
        with pytest.raises(GridError):
            ScaleContext(sigma0=sigma0, epsilon=epsilon)
