"""
Shared fixtures of the xigeo test suite. Surfaces and bundles are session scoped since they are immutable.
"""
import os

import numpy as np
import pytest

from xigeo import curves, geometry, grid, surfaces

TEST_RESOURCES = os.path.join(os.path.dirname(__file__), "test_resources")


@pytest.fixture(scope="session")
def resources():
    return TEST_RESOURCES


@pytest.fixture(scope="session")
def spec64():
    return grid.GridSpec(64, 64)


@pytest.fixture(scope="session")
def clifford(spec64):
    return surfaces.make_product_torus(1.0, 1.0, spec64)


@pytest.fixture(scope="session")
def clifford_bundle(clifford):
    return geometry.compute_bundle(clifford)


@pytest.fixture(scope="session")
def torus_1_2(spec64):
    return surfaces.make_product_torus(1.0, 2.0, spec64)


@pytest.fixture(scope="session")
def torus_1_2_bundle(torus_1_2):
    return geometry.compute_bundle(torus_1_2)


@pytest.fixture(scope="session")
def ellipse_product():
    return surfaces.make_product_curves(curves.ellipse(1.0, 1.2, 64), curves.circle(1.0, 64))


@pytest.fixture(scope="session")
def ellipse_product_bundle(ellipse_product):
    return geometry.compute_bundle(ellipse_product)


@pytest.fixture(scope="session")
def non_lagrangian(spec64):
    return surfaces.make_clifford_like(lambda u, v: (np.cos(u), np.cos(v), np.sin(u), np.sin(v)), spec64)


@pytest.fixture(scope="session")
def certified_circles():
    """
    Factory of certified products of two lambda-circles
    """
    def build(r1, r2, n=64):
        return curves.product_xi(curves.circle(r1, n), curves.circle_lambda(r1), curves.circle(r2, n),
                                 curves.circle_lambda(r2))
    return build
