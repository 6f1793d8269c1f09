"""
Unit tests for the periodic grid and spectral calculus
"""
import numpy as np
import pytest

from xigeo import grid
from xigeo.exceptions import DegenerateMetricError, GridError


class TestGridSuite(object):
    """
    Unit Test Suite for grid.py
    """

    def test_sample_points_have_no_endpoint(self):
        spec = grid.GridSpec(8, 10, 2.0, 5.0)
        u, v = spec.points()
        assert u[0] == 0.0 and v[0] == 0.0
        assert np.allclose(u, np.arange(8) * 0.25)
        assert np.allclose(v, np.arange(10) * 0.5)
        U, V = spec.mesh()
        assert U.shape == (8, 10)
        assert U[3, 7] == u[3] and V[3, 7] == v[7]

    @pytest.mark.parametrize("kwargs", [dict(nu=4, nv=16), dict(nu=16, nv=7), dict(nu=16, nv=16, period_u=0.0),
                                        dict(nu=16, nv=16, period_v=float("inf"))])
    def test_invalid_grid_is_rejected(self, kwargs):
        with pytest.raises(GridError):
            grid.GridSpec(**kwargs)

    def test_derivative_of_constant_is_zero(self):
        spec = grid.GridSpec(16, 16, 3.0, 7.0)
        f = grid.Field(spec, np.full(spec.shape, 2.5))
        assert np.max(np.abs(grid.differentiate(f, "u").values)) <= 1e-13
        assert np.max(np.abs(grid.differentiate(f, "v", order=2).values)) <= 1e-13

    def test_first_and_second_derivative_of_sine(self):
        period = 3.0
        spec = grid.GridSpec(32, 8, period, 1.0)
        u, _ = spec.mesh()
        k = 2 * np.pi / period
        f = grid.Field(spec, np.sin(k * u))
        first = grid.differentiate(f, "u").values
        second = grid.differentiate(f, "u", order=2).values
        assert np.max(np.abs(first - k * np.cos(k * u))) <= 1e-12
        assert np.max(np.abs(second + k ** 2 * np.sin(k * u))) <= 1e-10

    def test_vector_fields_are_differentiated_componentwise(self):
        spec = grid.GridSpec(16, 16)
        u, v = spec.mesh()
        values = np.stack([np.sin(u), np.cos(2 * v)], axis=-1)
        derivative = grid.derivative(values, spec, "v")
        assert derivative.shape == values.shape
        assert np.max(np.abs(derivative[..., 0])) <= 1e-12
        assert np.max(np.abs(derivative[..., 1] + 2 * np.sin(2 * v))) <= 1e-12

    def test_derivatives_are_linear_and_commute(self):
        spec = grid.GridSpec(24, 24)
        u, v = spec.mesh()
        f = np.sin(u) * np.cos(2 * v) + np.cos(3 * u + v)
        g = np.sin(2 * u - v)
        combined = grid.derivative(2.0 * f - 3.0 * g, spec, 0)
        separate = 2.0 * grid.derivative(f, spec, 0) - 3.0 * grid.derivative(g, spec, 0)
        assert np.max(np.abs(combined - separate)) <= 1e-12
        uv = grid.derivative(grid.derivative(f, spec, 0), spec, 1)
        vu = grid.derivative(grid.derivative(f, spec, 1), spec, 0)
        assert np.max(np.abs(uv - vu)) <= 1e-9

    def test_spectral_convergence(self):
        errors = []
        for n in (16, 32):
            spec = grid.GridSpec(n, 8)
            u, _ = spec.mesh()
            exact = np.cos(u) * np.exp(np.sin(u))
            errors.append(np.max(np.abs(grid.derivative(np.exp(np.sin(u)), spec, 0) - exact)))
        assert errors[0] / max(errors[1], 1e-300) >= 1e3

    def test_non_finite_values_name_the_grid_index(self):
        spec = grid.GridSpec(8, 8)
        values = np.zeros(spec.shape)
        values[2, 5] = np.nan
        with pytest.raises(GridError) as err:
            grid.derivative(values, spec, "u")
        assert "(2, 5)" in str(err.value)
        with pytest.raises(GridError):
            grid.Field(spec, values)

    def test_unknown_axis(self):
        spec = grid.GridSpec(8, 8)
        with pytest.raises(GridError):
            grid.derivative(np.zeros(spec.shape), spec, "w")

    def test_integrate_constant_and_sine(self):
        spec = grid.GridSpec(16, 16)
        u, _ = spec.mesh()
        ones = np.ones(spec.shape)
        assert grid.integrate(grid.Field(spec, ones), ones) == pytest.approx(4 * np.pi ** 2, rel=1e-14)
        assert abs(grid.integrate(grid.Field(spec, np.sin(u)), ones)) <= 1e-12

    def test_integral_of_derivative_vanishes(self):
        spec = grid.GridSpec(32, 16)
        u, v = spec.mesh()
        f = np.exp(np.sin(u) * np.cos(v))
        result = grid.integrate(grid.Field(spec, grid.derivative(f, spec, 0)), np.ones(spec.shape))
        assert abs(result) <= 1e-10 * np.max(np.abs(f))

    def test_non_positive_area_element_is_reported(self):
        spec = grid.GridSpec(8, 8)
        area = np.ones(spec.shape)
        area[4, 1] = -0.5
        with pytest.raises(DegenerateMetricError) as err:
            grid.integrate(grid.Field(spec, np.ones(spec.shape)), area)
        assert err.value.min_value == -0.5
        assert err.value.location == (4, 1)
