"""
Weighted calculus for the Gaussian weight e^{-|x|^2/2}: gradients, Laplacians, the drift operator
L f = Laplace f - <x, grad f>, weighted integrals and integration by parts checks.
"""

import logging
from dataclasses import dataclass

import numpy as np

from xigeo import grid, util
from xigeo.geometry_impl import tensors

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class ScalarCalc:
    """
    Calculus of one scalar field: df[..., i] = f_,i, grad[..., i] = g^ij f_,j
    """
    f: np.ndarray
    df: np.ndarray
    grad: np.ndarray
    laplacian: np.ndarray
    drift: np.ndarray


def _values(f):
    return f.values if isinstance(f, grid.Field) else np.asarray(f, dtype=float)


def gaussian_weight(b):
    return np.exp(-0.5 * b.position_squared)


def drift_laplacian(m, b, f):
    """
    Laplace-Beltrami operator and drift Laplacian of a scalar field.

    Laplace f = g^ij (f_,ij - Gamma^k_ij f_,k), <x, grad f> = g^ij t_i f_,j, L f = Laplace f - <x, grad f>.

    Args:
        :m: the ImmersionGrid
        :b: its GeometryBundle
        :f: scalar Field or (nu, nv) array

    Returns:
        ScalarCalc
    """
    values = _values(f)
    grid.check_finite(values, "scalar field")
    metric = b.metric
    df = tensors.partials(values, b.spec)
    hessian = tensors.covariant_derivative(df, metric.christoffel, b.spec)
    laplacian = np.einsum('xyij,xyij->xy', metric.g_inv, hessian)
    grad = np.einsum('xyij,xyj->xyi', metric.g_inv, df)
    drift_term = np.einsum('xyi,xyi->xy', b.tangent_position, grad)
    return ScalarCalc(values, df, grad, laplacian, laplacian - drift_term)


def weighted_integral(f, m, b):
    """
    Integral of f e^{-|x|^2/2} dV over the torus
    """
    values = _values(f)
    return grid.integrate(grid.Field(b.spec, values * gaussian_weight(b)), b.metric.area_element)


def _gradient_pairing(calc_u, calc_v, b):
    forward = np.einsum('xyi,xyi->xy', calc_u.grad, calc_v.df)
    backward = np.einsum('xyi,xyi->xy', calc_v.grad, calc_u.df)
    return 0.5 * (forward + backward)


def _one_sided(calc_u, calc_v, pairing, m, b):
    drift_side = weighted_integral(calc_u.f * calc_v.drift, m, b)
    gradient_side = weighted_integral(pairing, m, b)
    return abs(drift_side + gradient_side) / (1.0 + max(abs(drift_side), abs(gradient_side)))


def ibp_residual(u, v, m, b):
    """
    Integration by parts residual for the weighted measure,
    |int u L v w dV + int <grad u, grad v> w dV| / (1 + max of the two magnitudes), taken in both orders
    so that swapping u and v gives the same value.

    Args:
        :u: scalar Field or array
        :v: scalar Field or array
        :m: the ImmersionGrid
        :b: its GeometryBundle

    Returns:
        the normalized residual
    """
    calc_u = drift_laplacian(m, b, u)
    calc_v = drift_laplacian(m, b, v)
    pairing = _gradient_pairing(calc_u, calc_v, b)
    residual = max(_one_sided(calc_u, calc_v, pairing, m, b), _one_sided(calc_v, calc_u, pairing, m, b))
    log.debug("Integration by parts residual {}".format(residual))
    return residual


def self_adjointness_residual(u, v, m, b):
    """
    |int u L v w dV - int v L u w dV| normalized by 1 + the larger magnitude
    """
    calc_u = drift_laplacian(m, b, u)
    calc_v = drift_laplacian(m, b, v)
    first = weighted_integral(calc_u.f * calc_v.drift, m, b)
    second = weighted_integral(calc_v.f * calc_u.drift, m, b)
    return abs(first - second) / (1.0 + max(abs(first), abs(second)))


def lemma_3_5_residual(m, b):
    """
    Pointwise check of 1/2 Laplace |x|^2 = 2 - <H, H - xi> with xi = H + x^perp, i.e. 2 + <H, x^perp>

    Returns:
        the normalized sup residual
    """
    calc = drift_laplacian(m, b, b.position_squared)
    rhs = 2.0 + tensors.inner(b.H, b.x_perp)
    return util.normalized_residual(0.5 * calc.laplacian, rhs)
