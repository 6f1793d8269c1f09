"""
Analysis of Lagrangian xi-surfaces, i.e. surfaces with H + x^perp = xi for a parallel normal field xi.

xi_hat = H + x^perp is estimated pointwise and its parallelism is tested through the tangent field
w = -J xi_hat, which is Levi-Civita parallel exactly when xi_hat is normal-parallel.

Example usage:

>>> from xigeo import grid, surfaces, xi
>>> analysis = xi.analyze(surfaces.make_product_torus(1.0, 2.0, grid.GridSpec(64, 64)))
>>> analysis.estimate.is_xi
True
"""

import logging
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from xigeo import constants, curves, drift, geometry, grid, util
from xigeo.exceptions import ApplicabilityError, NotLagrangianError, ParameterError
from xigeo.geometry_impl import tensors
from xigeo.xi_impl import identities

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class XiEstimate:
    """
    Pointwise xi_hat, the tangent field w = -J xi_hat in coordinate components, and the parallelism test.

    coefficients holds the mean of <xi_hat, J e_k> over the Gram-Schmidt frame when is_xi, else None.
    """
    xi_hat: np.ndarray
    w: np.ndarray
    projection_residual: float
    normality_residual: float
    parallel_residual: float
    is_xi: bool
    coefficients: Optional[tuple] = None
    coefficient_spread: Optional[float] = None


@dataclass(frozen=True)
class PinchingCondition:
    name: str
    margin: float
    holds: bool
    zero_margin: bool


@dataclass(frozen=True)
class PinchingReport:
    """
    P = |h|^2 + |H - xi|^2 - |xi|^2 - 4 and the four side conditions
    (1) |h|^2 >= 2, (2) |H|^2 >= 2, (3) |h|^2 >= <H, H - xi>, (4) <H, xi> >= 0.
    """
    P: np.ndarray
    P_min: float
    P_max: float
    conditions: tuple
    H_xi_const_residual: float
    advisory: bool
    h2: np.ndarray
    H2: np.ndarray
    difference2: np.ndarray
    xi2: np.ndarray
    H_xi: np.ndarray

    def condition(self, name):
        for condition in self.conditions:
            if condition.name == name:
                return condition
        raise ParameterError("Unknown pinching condition: {}".format(name))


@dataclass(frozen=True)
class ProductTorusFit:
    """
    (a, b) fitted from |H - xi|^2 = a^2 + b^2 and |h|^2 = 1/a^2 + 1/b^2, a <= b, with the largest
    deviation of any invariant field from its value on that product torus
    """
    a: float
    b: float
    distance: float
    matched: bool


@dataclass(frozen=True)
class GlobalChecks:
    area: float
    gauss_bonnet_integral: float
    genus: int
    genus_defect: float
    balance_residual: float
    maslov_nontrivial: Optional[bool]


@dataclass(frozen=True)
class IdentityResult:
    """
    residual is None exactly when the identity was skipped; reason then says why
    """
    residual: Optional[float]
    passed: Optional[bool]
    reason: Optional[str] = None


@dataclass(frozen=True)
class Analysis:
    """
    Everything xi.analyze computes for one surface. Parts that do not apply are None and listed in skipped.
    """
    surface: object
    tolerances: util.Tolerances
    bundle: geometry.GeometryBundle
    lagrangian: bool
    maslov: Optional[geometry.MaslovData]
    estimate: Optional[XiEstimate]
    pinching: Optional[PinchingReport]
    fit: Optional[ProductTorusFit]
    identities: dict
    globals: Optional[GlobalChecks]
    drift: dict
    certification_residual: Optional[float] = None
    skipped: dict = field(default_factory=dict)


def split_position(m, b):
    """
    Decomposes the position vector into x^T = g^ij t_i x_*d_j and x^perp = x - x^T

    Returns:
        (x_top Field, x_perp Field, |x^T|^2 Field)
    """
    top2 = np.einsum('xyi,xyi->xy', b.tangent_position, b.tangent_position_up)
    return grid.Field(b.spec, b.x_top), grid.Field(b.spec, b.x_perp), grid.Field(b.spec, top2)


def _require_lagrangian(b, tolerance):
    if b.lagrangian_residual > tolerance:
        raise NotLagrangianError("xi estimation needs a Lagrangian surface, residual {} > {}".format(
            b.lagrangian_residual, tolerance))


def xi_estimate(m, b, tolerances=None):
    """
    Estimates xi_hat = H + x^perp and tests whether it is parallel.

    Args:
        :m: the ImmersionGrid
        :b: its GeometryBundle
        :tolerances: util.Tolerances, from the environment when omitted

    Returns:
        XiEstimate; is_xi = parallel_residual <= tolerances.xi

    Raises:
        :NotLagrangianError: if the surface is not Lagrangian within tolerance
    """
    tolerances = tolerances or util.get_tolerances()
    _require_lagrangian(b, tolerances.lagrangian)
    metric = b.metric
    xi_hat = b.H + b.x_perp
    ambient_w = -tensors.complex_structure(xi_hat)
    w = tensors.tangent_components(ambient_w, metric.frame, metric.g_inv)
    reconstructed = np.einsum('xyi,xyia->xya', w, metric.frame)
    projection = util.sup_norm(ambient_w - reconstructed) / (1.0 + util.sup_norm(ambient_w))
    along = np.einsum('xya,xyia->xyi', xi_hat, metric.frame)
    lengths = np.sqrt(np.einsum('xyii->xyi', metric.g))
    normality = float(np.max(np.abs(along) / lengths) / (1.0 + util.sup_norm(xi_hat)))

    nabla_w = tensors.covariant_derivative_vector(w, metric.christoffel, b.spec)
    nabla_norm2 = np.einsum('xyik,xyjl,xyij,xykl->xy', metric.g, metric.g_inv, nabla_w, nabla_w)
    w_norm2 = np.einsum('xyij,xyi,xyj->xy', metric.g, w, w)
    parallel = float(np.sqrt(max(util.sup_norm(nabla_norm2), 0.0)) / (1.0 + np.sqrt(util.sup_norm(w_norm2))))
    is_xi = parallel <= tolerances.xi

    coefficients = None
    spread = None
    if is_xi:
        _, e = geometry.orthonormal_frame(metric)
        values = np.einsum('xya,xyka->xyk', xi_hat, tensors.complex_structure(e))
        coefficients = tuple(float(np.mean(values[..., k])) for k in range(2))
        spread = float(np.max(np.max(values, axis=(0, 1)) - np.min(values, axis=(0, 1))))
    log.info("xi estimate: parallel residual {}, is_xi {}".format(parallel, is_xi))
    return XiEstimate(xi_hat, w, float(projection), normality, parallel, bool(is_xi), coefficients, spread)


def _condition(name, margin):
    zero = constants.TOLERANCES.CONDITION_ZERO
    return PinchingCondition(name, float(margin), bool(margin >= -zero), bool(abs(margin) <= zero))


def pinching_report(m, b, e):
    """
    Pinching functional P = |h|^2 + |H - xi|^2 - |xi|^2 - 4 and the side conditions with their margins.

    A condition holds when its margin is >= -constants.TOLERANCES.CONDITION_ZERO; zero_margin flags
    margins within that bound. The report is advisory when the surface is not a xi-surface.

    Args:
        :m: the ImmersionGrid
        :b: its GeometryBundle
        :e: its XiEstimate

    Returns:
        PinchingReport
    """
    difference = b.H - e.xi_hat
    difference2 = tensors.inner(difference, difference)
    xi2 = tensors.inner(e.xi_hat, e.xi_hat)
    H_xi = tensors.inner(b.H, e.xi_hat)
    P = b.h2 + difference2 - xi2 - 4.0
    conditions = (
        _condition("c1", np.min(b.h2) - 2.0),
        _condition("c2", np.min(b.H2) - 2.0),
        _condition("c3", np.min(b.h2 - tensors.inner(b.H, difference))),
        _condition("c4", np.min(H_xi)),
    )
    if not e.is_xi:
        log.warning("Pinching report on a surface that is not a xi-surface is advisory only")
    return PinchingReport(P=P, P_min=float(np.min(P)), P_max=float(np.max(P)), conditions=conditions,
                          H_xi_const_residual=float(np.max(H_xi) - np.min(H_xi)), advisory=not e.is_xi,
                          h2=b.h2, H2=b.H2, difference2=difference2, xi2=xi2, H_xi=H_xi)


def fit_product_torus(report, tolerance=constants.TOLERANCES.FAMILY_MATCH):
    """
    Fits the product torus S^1(a) x S^1(b) whose invariants best explain a pinching report.

    a^2 and b^2 are the roots of z^2 - S z + S/T with S = mean |H - xi|^2 and T = mean |h|^2.

    Returns:
        ProductTorusFit, or None when no real positive (a, b) exists
    """
    S = float(np.mean(report.difference2))
    T = float(np.mean(report.h2))
    if not (S > 0 and T > 0):
        return None
    discriminant = S * S - 4.0 * S / T
    if discriminant < -tolerance * (1.0 + S * S):
        return None
    root = np.sqrt(max(discriminant, 0.0))
    low, high = 0.5 * (S - root), 0.5 * (S + root)
    if not low > 0:
        return None
    a, b = float(np.sqrt(low)), float(np.sqrt(high))
    inverse = 1.0 / a ** 2 + 1.0 / b ** 2
    expected = (
        (report.h2, inverse),
        (report.H2, inverse),
        (report.difference2, a ** 2 + b ** 2),
        (report.xi2, (1.0 / a - a) ** 2 + (1.0 / b - b) ** 2),
        (report.H_xi, inverse - 2.0),
        (report.P, 0.0),
    )
    distance = max(util.sup_norm(values - value) for values, value in expected)
    return ProductTorusFit(a, b, float(distance), bool(distance <= tolerance))


def _maslov_or_compute(m, b, maslov_data, tolerances):
    if maslov_data is None:
        maslov_data = geometry.maslov(m, b, tolerances.lagrangian)
    return maslov_data


def verify_identity(identity, m, b, e, maslov_data=None, tolerances=None):
    """
    Normalized sup residual of one identity.

    Args:
        :identity: an id from constants.IDENTITIES.ALL
        :m: the ImmersionGrid
        :b: its GeometryBundle (covariant derivatives are added when missing)
        :e: its XiEstimate
        :maslov_data: MaslovData, computed when needed and omitted
        :tolerances: util.Tolerances

    Returns:
        the residual

    Raises:
        :ApplicabilityError: if the surface does not meet the identity's precondition
        :ParameterError: for an unknown identity id
    """
    tolerances = tolerances or util.get_tolerances()
    if identity not in constants.IDENTITIES.ALL:
        raise ParameterError("Unknown identity {}, expected one of {}".format(identity, constants.IDENTITIES.ALL))
    if b.lagrangian_residual > tolerances.lagrangian:
        raise ApplicabilityError("Identity {} needs a Lagrangian surface, residual {} > {}".format(
            identity, b.lagrangian_residual, tolerances.lagrangian))
    if identity in identities.XI_CHECKS and not e.is_xi:
        raise ApplicabilityError("Identity {} needs a xi-surface, parallel residual {} > {}".format(
            identity, e.parallel_residual, tolerances.xi))
    if not b.has_derivatives:
        b = geometry.covariant_derivatives(b)
    if identity in constants.IDENTITIES.CURVATURE:
        return geometry.curvature_residuals(b)[identity]
    if identity in identities.NEEDS_MASLOV:
        maslov_data = _maslov_or_compute(m, b, maslov_data, tolerances)
    check = identities.XI_CHECKS.get(identity) or identities.GENERAL_CHECKS[identity]
    residual = check(m, b, e, maslov_data)
    log.debug("Identity {}: residual {}".format(identity, residual))
    return residual


def global_checks(m, b, e, maslov_data=None):
    """
    Gauss-Bonnet integral and inferred genus, the balance of int |H - xi|^2 against int (|xi|^2 + 4 - |H|^2),
    and Maslov nontriviality.

    Returns:
        GlobalChecks
    """
    spec, area_element = b.spec, b.metric.area_element
    integral = grid.integrate(grid.Field(spec, b.K), area_element)
    raw_genus = 1.0 - integral / (4 * np.pi)
    difference = b.H - e.xi_hat
    left = grid.integrate(grid.Field(spec, tensors.inner(difference, difference)), area_element)
    right = grid.integrate(grid.Field(spec, tensors.inner(e.xi_hat, e.xi_hat) + 4.0 - b.H2), area_element)
    balance = abs(left - right) / (1.0 + max(abs(left), abs(right)))
    return GlobalChecks(area=b.metric.area(), gauss_bonnet_integral=float(integral), genus=int(round(raw_genus)),
                        genus_defect=float(abs(raw_genus - round(raw_genus))), balance_residual=float(balance),
                        maslov_nontrivial=None if maslov_data is None else bool(maslov_data.nontrivial))


def _drift_checks(m, b):
    u, v = b.spec.mesh()
    first = np.sin(2 * np.pi * u / b.spec.period_u)
    second = np.cos(2 * np.pi * v / b.spec.period_v) + np.sin(4 * np.pi * u / b.spec.period_u)
    return {
        "ibp_residual": drift.ibp_residual(first, second, m, b),
        "self_adjointness_residual": drift.self_adjointness_residual(first, second, m, b),
        "lemma_3_5_residual": drift.lemma_3_5_residual(m, b),
    }


def _skip(reason):
    return IdentityResult(None, None, reason)


def analyze(m, tolerances=None, certified=None):
    """
    Full pipeline for one surface: geometry, drift checks, xi estimate, pinching, identities, global checks.

    Args:
        :m: the ImmersionGrid
        :tolerances: util.Tolerances, from the environment when omitted
        :certified: optional curves.CertifiedSurface for m; its xi is compared with the estimate

    Returns:
        Analysis

    Raises:
        :CertificationError: if a certified xi does not match the estimate
    """
    tolerances = tolerances or util.get_tolerances()
    bundle = geometry.compute_bundle(m)
    lagrangian = bundle.lagrangian_residual <= tolerances.lagrangian
    drift_checks = _drift_checks(m, bundle)
    skipped = {}
    results = {}
    if not lagrangian:
        reason = "surface is not Lagrangian: residual {} > {}".format(bundle.lagrangian_residual,
                                                                      tolerances.lagrangian)
        log.warning(reason)
        for key in ("maslov", "xi", "pinching", "fit", "global"):
            skipped[key] = reason
        results = {identity: _skip(reason) for identity in constants.IDENTITIES.ALL}
        return Analysis(m, tolerances, bundle, False, None, None, None, None, results, None, drift_checks,
                        skipped=skipped)

    maslov_data = geometry.maslov(m, bundle, tolerances.lagrangian)
    estimate = xi_estimate(m, bundle, tolerances)
    pinching = pinching_report(m, bundle, estimate)
    fit = fit_product_torus(pinching) if estimate.is_xi else None
    if fit is None:
        skipped["fit"] = "not a xi-surface" if not estimate.is_xi else "no product torus matches the invariants"
    curvature = geometry.curvature_residuals(bundle)
    for identity in constants.IDENTITIES.ALL:
        if identity in identities.XI_CHECKS and not estimate.is_xi:
            results[identity] = _skip("not a xi-surface: parallel residual {} > {}".format(
                estimate.parallel_residual, tolerances.xi))
            continue
        if identity in curvature:
            residual = curvature[identity]
        else:
            residual = verify_identity(identity, m, bundle, estimate, maslov_data, tolerances)
        results[identity] = IdentityResult(float(residual), bool(residual <= tolerances.identity))
    checks = global_checks(m, bundle, estimate, maslov_data)
    certification = None
    if certified is not None:
        certification = curves.certify(certified, estimate, constants.TOLERANCES.CERTIFICATION)
    log.info("Analysis of {} finished: is_xi {}, P in [{}, {}]".format(
        m.provenance.get("family"), estimate.is_xi, pinching.P_min, pinching.P_max))
    return Analysis(m, tolerances, bundle, True, maslov_data, estimate, pinching, fit, results, checks,
                    drift_checks, certification, skipped)
