"""
Unit tests for the geometry kernel
"""
import numpy as np
import pytest

from xigeo import constants, curves, geometry, grid, surfaces
from xigeo.exceptions import DegenerateMetricError, HypothesisError, NotLagrangianError
from xigeo.geometry_impl import tensors


@pytest.fixture(scope="module")
def equivariant_residuals():
    """
    Bundle and structure-equation residuals of the curved equivariant surface over ellipse(1, 1.3), by resolution
    """
    results = {}
    for n in (32, 64):
        m = surfaces.make_equivariant(curves.ellipse(1.0, 1.3, n), grid.GridSpec(n, n))
        b = geometry.compute_bundle(m)
        results[n] = (b, geometry.curvature_residuals(b))
    return results


def _distance_to_lattice(theta, step):
    remainder = np.mod(theta, step)
    return np.minimum(remainder, step - remainder)


class TestTensorsSuite(object):
    """
    Unit Test Suite for geometry_impl/tensors.py
    """

    def test_complex_structure_squares_to_minus_one(self):
        v = np.array([1.0, 2.0, 3.0, 4.0])
        assert np.array_equal(tensors.complex_structure(v), [-2.0, 1.0, -4.0, 3.0])
        assert np.array_equal(tensors.complex_structure(tensors.complex_structure(v)), -v)
        assert tensors.symplectic_form(v, v) == 0.0

    def test_inverse_2x2(self):
        m = np.array([[[[2.0, 0.5], [0.5, 1.0]]]])
        inv, det = tensors.inverse_2x2(m)
        assert det[0, 0] == pytest.approx(1.75)
        assert np.allclose(inv[0, 0] @ m[0, 0], np.eye(2))

    def test_orthonormal_frame_is_orthonormal_and_oriented(self):
        g = np.array([[[[2.0, 0.3], [0.3, 0.5]]]])
        E = tensors.orthonormal_frame(g)
        assert np.allclose(np.einsum('xyai,xyij,xybj->xyab', E, g, E), np.eye(2))
        assert np.linalg.det(E[0, 0]) > 0
        assert E[0, 0, 0, 1] == 0.0

    def test_full_norm_of_symmetric_tensor(self):
        g_inv = np.broadcast_to(np.diag([1.0, 0.25]), (1, 1, 2, 2))
        C = np.zeros((1, 1, 2, 2, 2))
        C[..., 1, 1, 1] = 2.0
        assert tensors.full_norm_squared(C, g_inv)[0, 0] == pytest.approx(4.0 * 0.25 ** 3)


class TestGeometrySuite(object):
    """
    Unit Test Suite for geometry.py
    """

    def test_product_torus_metric(self, torus_1_2):
        metric = geometry.metric_and_connection(torus_1_2)
        assert np.allclose(metric.g11, 1.0, atol=1e-12)
        assert np.allclose(metric.g22, 4.0, atol=1e-12)
        assert np.max(np.abs(metric.g12)) <= 1e-12
        assert np.max(np.abs(metric.christoffel)) <= 1e-10
        assert metric.area() == pytest.approx(4 * np.pi ** 2 * 2.0, rel=1e-12)

    def test_christoffel_symmetry(self, ellipse_product_bundle):
        G = ellipse_product_bundle.metric.christoffel
        assert np.max(np.abs(G - np.swapaxes(G, -1, -2))) <= 1e-14

    def test_unit_speed_product_is_flat(self, ellipse_product_bundle):
        assert np.max(np.abs(ellipse_product_bundle.metric.christoffel)) <= 1e-8
        assert np.max(np.abs(ellipse_product_bundle.K)) <= 1e-8

    def test_degenerate_metric_is_reported(self, spec64):
        collapsed = surfaces.make_clifford_like(lambda u, v: (np.cos(u), np.sin(u), np.cos(u), np.sin(u)), spec64)
        with pytest.raises(DegenerateMetricError) as err:
            geometry.metric_and_connection(collapsed)
        assert err.value.min_value < constants.TOLERANCES.DET_G_MIN

    def test_clifford_invariants(self, clifford_bundle):
        assert np.allclose(clifford_bundle.h2, 2.0, atol=1e-10)
        assert np.allclose(clifford_bundle.H2, 2.0, atol=1e-10)
        assert np.max(np.abs(clifford_bundle.K)) <= 1e-10

    def test_product_torus_cubic_form(self, torus_1_2_bundle):
        components = torus_1_2_bundle.cubic.components
        assert np.allclose(components["C111"], 1.0, atol=1e-10)
        assert np.allclose(components["C222"], 4.0, atol=1e-10)
        assert np.max(np.abs(components["C112"])) <= 1e-10
        assert np.max(np.abs(components["C122"])) <= 1e-10
        assert np.allclose(torus_1_2_bundle.h2, 1.25, atol=1e-10)
        assert np.max(np.abs(torus_1_2_bundle.K - torus_1_2_bundle.K_extrinsic)) <= 1e-8

    def test_raw_cubic_form_is_symmetric(self, ellipse_product_bundle):
        cubic = ellipse_product_bundle.cubic
        assert cubic.asymmetry <= 1e-7
        assert np.max(np.abs(ellipse_product_bundle.K - ellipse_product_bundle.K_extrinsic)) <= 1e-7

    def test_mean_curvature_is_normal(self, ellipse_product_bundle):
        b = ellipse_product_bundle
        along = np.einsum('xya,xyia->xyi', b.H, b.metric.frame)
        scale = np.sqrt(b.H2)[..., None] * np.sqrt(np.einsum('xyii->xyi', b.metric.g))
        assert np.max(np.abs(along) - 1e-8 * scale) <= 0.0

    def test_covariant_derivatives_vanish_on_product_torus(self, torus_1_2_bundle):
        assert np.max(np.abs(torus_1_2_bundle.grad_cubic)) <= 1e-9
        assert np.max(np.abs(torus_1_2_bundle.grad_h2)) <= 1e-12
        assert np.max(np.abs(torus_1_2_bundle.grad_H_normal2)) <= 1e-12

    def test_grad_cubic_is_totally_symmetric(self, ellipse_product_bundle):
        grad = ellipse_product_bundle.grad_cubic
        assert np.max(np.abs(grad - np.swapaxes(grad, -1, -2))) <= 1e-7 * (1 + np.max(np.abs(grad)))
        assert np.max(np.abs(grad - np.swapaxes(grad, 2, 5))) <= 1e-7 * (1 + np.max(np.abs(grad)))

    def test_structure_equations_on_product_torus(self, torus_1_2_bundle):
        residuals = geometry.curvature_residuals(torus_1_2_bundle)
        assert list(residuals) == constants.IDENTITIES.CURVATURE
        for identity, residual in residuals.items():
            assert residual <= 1e-9, identity

    def test_structure_equations_on_ellipse_product(self, ellipse_product_bundle):
        residuals = geometry.curvature_residuals(ellipse_product_bundle)
        for identity in (constants.IDENTITIES.GAUSS, constants.IDENTITIES.CODAZZI, constants.IDENTITIES.RICCI,
                         constants.IDENTITIES.EQ_2_13, constants.IDENTITIES.MOTION, constants.IDENTITIES.EQ_2_10,
                         constants.IDENTITIES.RICCI_IDENTITY):
            assert residuals[identity] <= 1e-6, identity
        assert residuals[constants.IDENTITIES.CUBIC_SYMMETRY] <= 1e-7

    def test_structure_equations_on_curved_equivariant_surface(self, equivariant_residuals):
        b = equivariant_residuals[64][0]
        assert np.max(np.abs(b.K)) > 1e-1
        residuals = equivariant_residuals[64][1]
        assert list(residuals) == constants.IDENTITIES.CURVATURE
        for identity, residual in residuals.items():
            assert residual <= 1e-6, identity

    @pytest.mark.parametrize("identity", constants.IDENTITIES.CURVATURE)
    def test_structure_equations_converge_on_curved_surface(self, equivariant_residuals, identity):
        coarse = equivariant_residuals[32][1][identity]
        fine = equivariant_residuals[64][1][identity]
        assert np.isfinite(coarse)
        assert fine <= coarse or fine <= 1e-8

    def test_gauss_residual_converges(self):
        def gauss_residual(n):
            c = curves.ellipse(1.0, 1.3, n)
            b = geometry.compute_bundle(surfaces.make_equivariant(c, grid.GridSpec(n, 16)), derivatives=False)
            return geometry.curvature_residuals(b)[constants.IDENTITIES.GAUSS]
        coarse, fine = gauss_residual(16), gauss_residual(32)
        assert fine <= 1e-2 * coarse or fine <= 1e-10

    def test_unitary_equivariance(self, ellipse_product, ellipse_product_bundle):
        moved = geometry.compute_bundle(surfaces.apply_unitary(ellipse_product, surfaces.random_unitary(11)))
        original = ellipse_product_bundle
        for name in ("h2", "H2", "K", "grad_h2"):
            assert np.max(np.abs(getattr(moved, name) - getattr(original, name))) <= 1e-9, name
        periods = geometry.maslov(ellipse_product, original).periods
        moved_periods = geometry.maslov(ellipse_product, moved).periods
        assert np.allclose(periods, moved_periods, atol=1e-9)


class TestMaslovSuite(object):
    """
    Unit Test Suite for the Lagrangian angle and Maslov form
    """

    def test_product_torus_angle_and_periods(self, torus_1_2, torus_1_2_bundle):
        data = geometry.maslov(torus_1_2, torus_1_2_bundle)
        u, v = torus_1_2.spec.mesh()
        expected = np.mod(u + v + np.pi, 2 * np.pi)
        difference = np.angle(np.exp(1j * (data.beta - expected)))
        assert np.max(np.abs(difference)) <= 1e-10
        assert data.rounded_periods == (1, 1)
        assert data.integrality_residual <= 1e-3
        assert data.nontrivial
        assert data.theorem_residual <= 1e-8
        assert data.consistency_residual <= 1e-8

    def test_theorem_residual_on_ellipse_product(self):
        m = surfaces.make_product_curves(curves.ellipse(1.0, 1.2, 128), curves.circle(1.0, 128))
        data = geometry.maslov(m, geometry.compute_bundle(m, derivatives=False))
        assert data.theorem_residual <= 1e-6
        assert data.rounded_periods == (1, 1)

    def test_theorem_residual_converges(self):
        def theorem_residual(n):
            m = surfaces.make_product_curves(curves.ellipse(1.0, 1.3, n), curves.circle(1.0, n))
            return geometry.maslov(m, geometry.compute_bundle(m, derivatives=False)).theorem_residual
        coarse, fine = theorem_residual(16), theorem_residual(32)
        assert fine <= 1e-2 * coarse or fine <= 1e-10

    def test_refuses_non_lagrangian_input(self, non_lagrangian):
        bundle = geometry.compute_bundle(non_lagrangian, derivatives=False)
        with pytest.raises(NotLagrangianError):
            geometry.maslov(non_lagrangian, bundle)


class TestDiagonalizeFrameSuite(object):
    """
    Unit Test Suite for the diagonalizing frame of flat Lagrangian surfaces
    """

    def test_product_torus_is_already_diagonal(self, torus_1_2_bundle):
        theta, residual = geometry.diagonalize_frame(torus_1_2_bundle)
        assert np.max(_distance_to_lattice(theta.values, np.pi / 2)) <= 1e-8
        assert residual <= 1e-10

    def test_rotated_frame_is_recovered(self, torus_1_2_bundle):
        theta, residual = geometry.diagonalize_frame(torus_1_2_bundle, pre_rotation=np.pi / 4)
        assert np.max(np.abs(theta.values - np.pi / 4)) <= 1e-8
        assert residual <= 1e-10

    def test_circle_product_pipeline(self):
        product = surfaces.make_product_curves(curves.circle(1.0, 32), curves.circle(2.0, 32))
        _, residual = geometry.diagonalize_frame(geometry.compute_bundle(product, derivatives=False))
        assert residual <= 1e-10

    def test_refuses_curved_surface(self):
        m = surfaces.make_equivariant(curves.ellipse(1.0, 1.5, 32), grid.GridSpec(32, 16))
        with pytest.raises(HypothesisError):
            geometry.diagonalize_frame(geometry.compute_bundle(m, derivatives=False))
