"""
Unit tests for surface constructors and the Lagrangian test
"""
import numpy as np
import pytest

from xigeo import constants, curves, geometry, grid, surfaces
from xigeo.exceptions import ClosureError, DegenerateMetricError, GridError, ParameterError


class TestSurfacesSuite(object):
    """
    Unit Test Suite for surfaces.py
    """

    def test_clifford_torus_has_constant_position_norm(self, clifford):
        assert np.allclose(np.sum(clifford.x ** 2, axis=-1), 2.0, atol=1e-14)
        assert clifford.family == constants.FAMILIES.PRODUCT_TORUS

    def test_product_torus(self, torus_1_2):
        assert np.allclose(np.sum(torus_1_2.x ** 2, axis=-1), 5.0, atol=1e-13)
        assert surfaces.lagrangian_residual(torus_1_2) <= 1e-12

    @pytest.mark.parametrize("a, b", [(0.0, 1.0), (1.0, -2.0), (float("nan"), 1.0)])
    def test_product_torus_rejects_bad_radii(self, spec64, a, b):
        with pytest.raises(ParameterError):
            surfaces.make_product_torus(a, b, spec64)

    def test_product_torus_needs_two_pi_periods(self):
        with pytest.raises(ParameterError):
            surfaces.make_product_torus(1.0, 1.0, grid.GridSpec(16, 16, 1.0, 2 * np.pi))

    def test_immersion_shape_is_checked(self, spec64):
        with pytest.raises(GridError):
            surfaces.ImmersionGrid(spec64, np.zeros((64, 64, 3)))

    def test_unit_circle_product_matches_clifford_torus(self, clifford_bundle):
        product = surfaces.make_product_curves(curves.circle(1.0, 64), curves.circle(1.0, 64))
        bundle = geometry.compute_bundle(product, derivatives=False)
        assert np.max(np.abs(bundle.h2 - clifford_bundle.h2)) <= 1e-10
        assert np.max(np.abs(bundle.H2 - clifford_bundle.H2)) <= 1e-10
        assert np.max(np.abs(bundle.K - clifford_bundle.K)) <= 1e-10

    def test_circle_product_second_fundamental_form(self):
        product = surfaces.make_product_curves(curves.circle(0.8, 32), curves.circle(1.5, 32))
        bundle = geometry.compute_bundle(product, derivatives=False)
        assert np.allclose(bundle.h2, 1 / 0.8 ** 2 + 1 / 1.5 ** 2, atol=1e-10)
        assert product.spec.period_u == pytest.approx(2 * np.pi * 0.8)

    def test_ellipse_product_is_lagrangian(self, ellipse_product):
        assert surfaces.lagrangian_residual(ellipse_product) <= 1e-10

    def test_open_curve_is_rejected(self):
        arc = curves.integrate_lambda_curve(0.0, (1.0, 0.0), (0.0, 1.0), 1.0)
        with pytest.raises(ClosureError):
            surfaces.make_product_curves(arc, curves.circle(1.0, 16))

    def test_equivariant_circle(self):
        rho = 1.3
        c = curves.circle(rho, 32)
        m = surfaces.make_equivariant(c, grid.GridSpec(32, 32))
        assert m.spec.period_u == pytest.approx(2 * np.pi * rho)
        assert m.spec.period_v == pytest.approx(2 * np.pi)
        metric = geometry.metric_and_connection(m)
        assert np.max(np.abs(metric.g11 - 1.0)) <= 1e-10
        assert np.max(np.abs(metric.g22 - rho ** 2)) <= 1e-10
        assert np.max(np.abs(metric.g12)) <= 1e-12
        assert np.max(np.abs(metric.gauss_curvature)) <= 1e-8
        assert surfaces.lagrangian_residual(m) <= 1e-12

    def test_equivariant_ellipse(self):
        c = curves.ellipse(1.0, 1.4, 64)
        m = surfaces.make_equivariant(c, grid.GridSpec(64, 32))
        metric = geometry.metric_and_connection(m)
        assert np.max(np.abs(metric.g12)) <= 1e-12
        assert surfaces.lagrangian_residual(m) <= 1e-10

    def test_equivariant_needs_matching_samples(self):
        with pytest.raises(GridError):
            surfaces.make_equivariant(curves.circle(1.0, 32), grid.GridSpec(16, 16))

    def test_equivariant_rejects_curve_through_origin(self):
        n = 16
        angle = 2 * np.pi * np.arange(n) / n
        gamma = np.stack([1.0 + np.cos(angle), np.sin(angle)], axis=-1)
        tangent = np.stack([-np.sin(angle), np.cos(angle)], axis=-1)
        c = curves.PlaneCurve(n, 2 * np.pi, gamma, tangent, np.ones(n), True)
        with pytest.raises(DegenerateMetricError) as err:
            surfaces.make_equivariant(c, grid.GridSpec(n, 16))
        assert err.value.location == (n // 2, 0)

    def test_non_lagrangian_example(self, non_lagrangian):
        assert surfaces.lagrangian_residual(non_lagrangian) == pytest.approx(1.0, abs=1e-12)

    def test_unitary_invariance(self, torus_1_2, non_lagrangian):
        unitary = surfaces.random_unitary(7)
        assert surfaces.lagrangian_residual(surfaces.apply_unitary(torus_1_2, unitary)) <= 1e-12
        moved = surfaces.apply_unitary(non_lagrangian, unitary)
        assert abs(surfaces.lagrangian_residual(moved) - surfaces.lagrangian_residual(non_lagrangian)) <= 1e-12
        assert moved.provenance["unitary"]

    def test_random_unitary_is_reproducible(self):
        assert np.array_equal(surfaces.random_unitary(3), surfaces.random_unitary(3))

    def test_apply_unitary_rejects_other_matrices(self, clifford):
        with pytest.raises(ParameterError):
            surfaces.apply_unitary(clifford, np.array([[2.0, 0.0], [0.0, 1.0]], dtype=complex))
        conjugation = np.diag([1.0, -1.0, 1.0, -1.0])
        with pytest.raises(ParameterError):
            surfaces.apply_unitary(clifford, conjugation)

    def test_translate(self, clifford):
        moved = surfaces.translate(clifford, [0.5, 0.0, -1.0, 2.0])
        assert np.allclose(moved.x - clifford.x, [0.5, 0.0, -1.0, 2.0])
        with pytest.raises(ParameterError):
            surfaces.translate(clifford, [1.0, 2.0])

    def test_shift_origin_keeps_surface_scalars(self, ellipse_product):
        shifted = surfaces.shift_origin(ellipse_product, 5, 11)
        assert np.array_equal(shifted.x[0, 0], ellipse_product.x[5, 11])
        before = geometry.metric_and_connection(ellipse_product).area()
        after = geometry.metric_and_connection(shifted).area()
        assert abs(before - after) <= 1e-10
        assert abs(surfaces.lagrangian_residual(shifted) - surfaces.lagrangian_residual(ellipse_product)) <= 1e-10
