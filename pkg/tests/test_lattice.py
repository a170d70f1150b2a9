"""Grid, analytic metric families, lattice derivatives, volume weight."""

from __future__ import annotations

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import oracles
from conftest import BOX_LENGTH, plane_grid
from fivevec import lattice


class TestGrid:
    def test_box_grid_coordinates_span_the_box(self):
        grid = lattice.periodic_box_grid(8)
        assert grid.shape == (8, 8, 8, 8)
        x0 = grid.axis_coordinates(0)
        assert x0[0] == 0.0
        assert np.allclose(np.diff(x0), 2.0 * np.pi / 8)
        assert np.allclose(grid.lengths(), 2.0 * np.pi)

    def test_coordinates_mesh_matches_axis_coordinates(self):
        grid = plane_grid(6, axes=(0,))
        x = grid.coordinates()
        assert x.shape == grid.shape + (4,)
        assert np.array_equal(x[:, 0, 0, 0, 0], grid.axis_coordinates(0))
        assert np.array_equal(x[0, :, 0, 0, 1], grid.axis_coordinates(1))

    def test_axes_below_minimum_are_rejected(self):
        with pytest.raises(ValueError):
            lattice.make_grid((4, 8, 8, 8), 0.1)

    def test_npoints(self):
        assert plane_grid(6, axes=(0, 1)).npoints == 6 * 6 * 5 * 5


class TestMetricField:
    def test_rejects_asymmetric_values(self, rng):
        grid = plane_grid(5, axes=())
        g = np.broadcast_to(lattice.MINKOWSKI, grid.shape + (4, 4)).copy()
        g[..., 0, 1] = 0.01
        with pytest.raises(ValueError):
            lattice.MetricField(g, grid)

    def test_rejects_non_lorentzian_determinant(self):
        grid = plane_grid(5, axes=())
        g = np.broadcast_to(np.eye(4), grid.shape + (4, 4)).copy()
        with pytest.raises(ValueError):
            lattice.volume_density(lattice.MetricField(g, grid))

    def test_inverse_is_pointwise_inverse(self):
        grid = plane_grid(8, axes=(0,))
        metric = lattice.metric_preset("diagonal-wave", grid)
        ident = np.einsum("...ab,...bc->...ac", metric.g, metric.inverse)
        assert np.max(np.abs(ident - np.eye(4))) < 1e-13


class TestMetricPresets:
    def test_flat_is_minkowski_everywhere(self):
        grid = plane_grid(6)
        metric = lattice.metric_preset("flat", grid)
        assert np.array_equal(metric.g, np.broadcast_to(lattice.MINKOWSKI, grid.shape + (4, 4)))

    def test_conformal_profile_matches_definition(self):
        grid = plane_grid(9, axes=(0,))
        metric = lattice.metric_preset("conformal", grid, amplitude=0.07)
        x0 = grid.coordinates()[..., 0]
        omega = 1.0 + 0.07 * np.sin(2.0 * np.pi * x0 / BOX_LENGTH)
        expected = omega[..., None, None] ** 2 * lattice.MINKOWSKI
        assert np.max(np.abs(metric.g - expected)) < 1e-14

    def test_diagonal_wave_is_diagonal_and_near_flat(self):
        grid = plane_grid(8)
        metric = lattice.metric_preset("diagonal-wave", grid)
        off = metric.g - np.eye(4) * np.einsum("...aa->...a", metric.g)[..., None] * np.eye(4)
        offdiag = metric.g * (1.0 - np.eye(4))
        assert np.max(np.abs(offdiag)) == 0.0
        assert np.max(np.abs(metric.g - lattice.MINKOWSKI)) < 0.1

    def test_diagonal_wave_amplitude_guard(self):
        grid = plane_grid(6)
        with pytest.raises(ValueError):
            lattice.metric_preset("diagonal-wave", grid, amplitudes=(0.1, 0.0, 0.0, 0.0))

    def test_unknown_preset_rejected(self):
        with pytest.raises(ValueError):
            lattice.metric_preset("schwarzschild", plane_grid(6))


class TestPartialDerivative:
    def test_sine_derivative_second_order(self):
        # error against the analytic cosine shrinks by ~4x when h halves
        errors = []
        for n in (64, 128):
            grid = plane_grid(n, axes=(0,))
            f = np.sin(grid.coordinates()[..., 0])
            df = lattice.partial_derivative(f, 0, grid)
            errors.append(np.max(np.abs(df - np.cos(grid.coordinates()[..., 0]))))
        h = BOX_LENGTH / 64
        assert errors[0] <= h**2  # C is about 1/6 for the sine wave
        ratio = errors[0] / errors[1]
        assert 3.7 < ratio < 4.3

    def test_nonperiodic_gradient_fallback(self):
        grid = lattice.make_grid((32, 5, 5, 5), 0.05, periodic=False)
        f = np.sin(grid.coordinates()[..., 0])
        df = lattice.partial_derivative(f, 0, grid)
        assert np.max(np.abs(df - np.cos(grid.coordinates()[..., 0]))) < 5e-3

    def test_constant_field_has_zero_derivative(self):
        grid = plane_grid(7)
        f = np.full(grid.shape, 2.5)
        for axis in range(4):
            assert np.max(np.abs(lattice.partial_derivative(f, axis, grid))) == 0.0

    @given(a=st.floats(-3, 3), b=st.floats(-3, 3))
    @settings(max_examples=25, deadline=None)
    def test_linearity(self, a, b):
        grid = plane_grid(8, axes=(0,))
        x0 = grid.coordinates()[..., 0]
        f, g = np.sin(x0), np.cos(2 * x0)
        lhs = lattice.partial_derivative(a * f + b * g, 0, grid)
        rhs = a * lattice.partial_derivative(f, 0, grid) + b * lattice.partial_derivative(
            g, 0, grid
        )
        assert np.max(np.abs(lhs - rhs)) < 1e-12 * (1 + abs(a) + abs(b))


class TestVolumeDensity:
    def test_flat_weight_is_one(self):
        metric = lattice.metric_preset("flat", plane_grid(6))
        assert np.max(np.abs(lattice.volume_density(metric) - 1.0)) == 0.0

    def test_constant_diagonal_example(self):
        # diag(1, -4, -1, -1) has determinant -4, so the weight is 2
        grid = plane_grid(6)
        g = np.broadcast_to(np.diag([1.0, -4.0, -1.0, -1.0]), grid.shape + (4, 4)).copy()
        weight = lattice.volume_density(lattice.MetricField(g, grid))
        assert np.max(np.abs(weight - 2.0)) < 1e-14

    def test_conformal_weight_is_fourth_power(self):
        grid = plane_grid(9, axes=(0,))
        metric = lattice.metric_preset("conformal", grid)
        x0 = grid.coordinates()[..., 0]
        omega = 1.0 + 0.05 * np.sin(2.0 * np.pi * x0 / BOX_LENGTH)
        assert np.max(np.abs(lattice.volume_density(metric) - omega**4)) < 1e-13
