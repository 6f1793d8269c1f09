"""
The geometry kernel: metric, connection, second fundamental form stored as the cubic form
C_ijl = <h(d_i, d_j), J x_*d_l>, curvature, covariant derivatives, Lagrangian angle and Maslov data.

Frame formulas translate to coordinate tensors as follows (N_k = J x_*d_k, t_i = <x, x_*d_i>):

    h_ij^{k*}            <->  C_ijk, and h(d_i, d_j) = C_ijm g^mn N_n
    V^{k*}               <->  V_k = <V, N_k>
    h_{ij,l}^{k*}        <->  (nabla C)_ijkl, derivative slot last
    H^{k*}_{,i}          <->  <nabla^perp_i H, N_k>
"""

import logging
from dataclasses import dataclass, replace
from typing import Optional

import numpy as np

from xigeo import constants, grid, surfaces, util
from xigeo.exceptions import DegenerateMetricError, HypothesisError, NotLagrangianError
from xigeo.geometry_impl import tensors

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class MetricField:
    """
    First fundamental form and Levi-Civita connection on the grid.

    christoffel[..., k, i, j] = Gamma^k_ij; gauss_curvature is the intrinsic K from the Brioschi formula.
    """
    spec: grid.GridSpec
    frame: np.ndarray
    g: np.ndarray
    g_inv: np.ndarray
    det: np.ndarray
    christoffel: np.ndarray
    area_element: np.ndarray
    gauss_curvature: np.ndarray

    @property
    def g11(self):
        return self.g[..., 0, 0]

    @property
    def g12(self):
        return self.g[..., 0, 1]

    @property
    def g22(self):
        return self.g[..., 1, 1]

    def area(self):
        return grid.quadrature(np.ones(self.spec.shape), self.area_element, self.spec)


@dataclass(frozen=True)
class CubicForm:
    """
    Totally symmetric cubic form C[..., i, j, l] (all indices down) with the raw projections it was
    symmetrized from. asymmetry = max|raw - C| / (1 + max|C|).
    """
    C: np.ndarray
    raw: np.ndarray
    asymmetry: float

    @property
    def components(self):
        """
        The independent components C111, C112, C122, C222
        """
        return {"C111": self.C[..., 0, 0, 0], "C112": self.C[..., 0, 0, 1],
                "C122": self.C[..., 0, 1, 1], "C222": self.C[..., 1, 1, 1]}


@dataclass(frozen=True)
class GeometryBundle:
    """
    Everything the analyses need about one immersion. The derivative fields stay None until
    covariant_derivatives has run.
    """
    spec: grid.GridSpec
    x: np.ndarray
    metric: MetricField
    second_derivatives: np.ndarray
    sff: np.ndarray
    cubic: CubicForm
    H: np.ndarray
    h2: np.ndarray
    H2: np.ndarray
    K: np.ndarray
    K_extrinsic: np.ndarray
    R: np.ndarray
    tangent_position: np.ndarray
    x_top: np.ndarray
    x_perp: np.ndarray
    lagrangian_residual: float
    eta: np.ndarray
    grad_cubic: Optional[np.ndarray] = None
    hess_cubic: Optional[np.ndarray] = None
    grad_H_normal: Optional[np.ndarray] = None
    grad_eta: Optional[np.ndarray] = None
    hess_eta: Optional[np.ndarray] = None
    grad_h2: Optional[np.ndarray] = None
    grad_H_normal2: Optional[np.ndarray] = None

    @property
    def has_derivatives(self):
        return self.grad_cubic is not None

    @property
    def position_squared(self):
        return tensors.inner(self.x, self.x)

    @property
    def tangent_position_up(self):
        """
        t^i = g^ij t_j, the coordinate components of x^T
        """
        return np.einsum('xyij,xyj->xyi', self.metric.g_inv, self.tangent_position)


@dataclass(frozen=True)
class MaslovData:
    """
    Lagrangian angle beta (mod 2 pi), Maslov form alpha_i = alpha(d_i) = -<JH, x_*d_i>, the locally
    unwrapped d beta, and the periods of alpha over the two generators divided by 2 pi.
    """
    beta: np.ndarray
    alpha: np.ndarray
    dbeta: np.ndarray
    periods: tuple
    consistency_residual: float
    theorem_residual: float

    @property
    def rounded_periods(self):
        return tuple(int(round(p)) for p in self.periods)

    @property
    def integrality_residual(self):
        return max(abs(p - round(p)) for p in self.periods)

    @property
    def nontrivial(self):
        return any(r != 0 for r in self.rounded_periods)


def _brioschi(g, spec):
    e, f, gg = g[..., 0, 0], g[..., 0, 1], g[..., 1, 1]
    e_u, e_v = grid.derivative(e, spec, 0), grid.derivative(e, spec, 1)
    f_u, f_v = grid.derivative(f, spec, 0), grid.derivative(f, spec, 1)
    g_u, g_v = grid.derivative(gg, spec, 0), grid.derivative(gg, spec, 1)
    e_vv = grid.derivative(e, spec, 1, order=2)
    g_uu = grid.derivative(gg, spec, 0, order=2)
    f_uv = grid.derivative(f_u, spec, 1)
    zero = np.zeros_like(e)
    m1 = np.stack([
        np.stack([-0.5 * e_vv + f_uv - 0.5 * g_uu, 0.5 * e_u, f_u - 0.5 * e_v], axis=-1),
        np.stack([f_v - 0.5 * g_u, e, f], axis=-1),
        np.stack([0.5 * g_v, f, gg], axis=-1)], axis=-2)
    m2 = np.stack([
        np.stack([zero, 0.5 * e_v, 0.5 * g_u], axis=-1),
        np.stack([0.5 * e_v, e, f], axis=-1),
        np.stack([0.5 * g_u, f, gg], axis=-1)], axis=-2)
    det = e * gg - f * f
    return (np.linalg.det(m1) - np.linalg.det(m2)) / det ** 2


def metric_and_connection(m):
    """
    First fundamental form g_ij = <x_*d_i, x_*d_j>, its inverse, Christoffel symbols and area element.

    Args:
        :m: the ImmersionGrid

    Returns:
        a MetricField

    Raises:
        :DegenerateMetricError: if det g < constants.TOLERANCES.DET_G_MIN somewhere
    """
    spec = m.spec
    frame = m.frame()
    g = tensors.gram(frame)
    g = 0.5 * (g + np.swapaxes(g, -1, -2))
    g_inv, det = tensors.inverse_2x2(g)
    location = np.unravel_index(int(np.argmin(det)), det.shape)
    minimum = float(det[location])
    if not minimum >= constants.TOLERANCES.DET_G_MIN:
        raise DegenerateMetricError("Degenerate metric: det g = {} at grid index {}".format(
            minimum, tuple(int(i) for i in location)), min_value=minimum, location=tuple(int(i) for i in location))
    christoffel = tensors.christoffel_symbols(g, g_inv, spec)
    curvature = _brioschi(g, spec)
    return MetricField(spec, frame, g, g_inv, det, christoffel, np.sqrt(det), curvature)


def second_fundamental(m, g=None):
    """
    Second fundamental form, cubic form, mean curvature and the scalar invariants.

    h(d_i, d_j) = (x_ij - Gamma^k_ij x_k)^perp; C_ijl = <h(d_i, d_j), J x_*d_l> symmetrized over all slots;
    H = g^ij h(d_i, d_j); |h|^2 = g^ik g^jl g^mn C_ijm C_kln; K both intrinsically and as (|H|^2 - |h|^2)/2.

    Args:
        :m: the ImmersionGrid
        :g: MetricField from metric_and_connection, computed when omitted

    Returns:
        a GeometryBundle without derivative fields
    """
    if g is None:
        g = metric_and_connection(m)
    spec = m.spec
    frame = g.frame
    ddx = np.einsum('xyiaj->xyija', tensors.partials(frame, spec))
    ddx = 0.5 * (ddx + np.swapaxes(ddx, 2, 3))
    tangential = np.einsum('xykij,xyka->xyija', g.christoffel, frame)
    sff = tensors.normal_projection(ddx - tangential, frame, g.g_inv)

    raw = tensors.normal_components(sff, frame)
    symmetric = (raw + np.einsum('xyijl->xyjli', raw) + np.einsum('xyijl->xylij', raw)
                 + np.einsum('xyijl->xyjil', raw) + np.einsum('xyijl->xyilj', raw)
                 + np.einsum('xyijl->xylji', raw)) / 6.0
    asymmetry = util.sup_norm(raw - symmetric) / (1.0 + util.sup_norm(symmetric))
    cubic = CubicForm(symmetric, raw, float(asymmetry))

    H = np.einsum('xyij,xyija->xya', g.g_inv, sff)
    h2 = tensors.full_norm_squared(symmetric, g.g_inv)
    H2 = tensors.inner(H, H)
    t = np.einsum('xya,xyia->xyi', m.x, frame)
    x_top = np.einsum('xyi,xyia->xya', np.einsum('xyij,xyj->xyi', g.g_inv, t), frame)
    x_perp = m.x - x_top
    eta = tensors.normal_components(H, frame)
    lagrangian = surfaces.lagrangian_residual(m)
    log.info("Second fundamental form on {}x{} grid: lagrangian residual {}, cubic asymmetry {}".format(
        spec.nu, spec.nv, lagrangian, asymmetry))
    return GeometryBundle(spec=spec, x=m.x, metric=g, second_derivatives=ddx, sff=sff, cubic=cubic, H=H, h2=h2,
                          H2=H2, K=g.gauss_curvature, K_extrinsic=0.5 * (H2 - h2), R=2.0 * g.gauss_curvature,
                          tangent_position=t, x_top=x_top, x_perp=x_perp, lagrangian_residual=lagrangian, eta=eta)


def covariant_derivatives(b):
    """
    Adds nabla C, nabla^2 C, nabla^perp H and the invariants |nabla h|^2, |nabla^perp H|^2 to a bundle.

    Args:
        :b: GeometryBundle from second_fundamental

    Returns:
        a new GeometryBundle with the derivative fields set
    """
    spec = b.spec
    metric = b.metric
    grad_cubic = tensors.covariant_derivative(b.cubic.C, metric.christoffel, spec)
    hess_cubic = tensors.covariant_derivative(grad_cubic, metric.christoffel, spec)
    dH = np.moveaxis(tensors.partials(b.H, spec), -1, 2)
    grad_H_normal = tensors.normal_projection(dH, metric.frame, metric.g_inv)
    grad_eta = tensors.covariant_derivative(b.eta, metric.christoffel, spec)
    hess_eta = tensors.covariant_derivative(grad_eta, metric.christoffel, spec)
    grad_h2 = tensors.full_norm_squared(grad_cubic, metric.g_inv)
    grad_H_normal2 = np.einsum('xyij,xyia,xyja->xy', metric.g_inv, grad_H_normal, grad_H_normal)
    log.debug("Covariant derivatives: max |nabla h|^2 = {}, max |nabla^perp H|^2 = {}".format(
        util.sup_norm(grad_h2), util.sup_norm(grad_H_normal2)))
    return replace(b, grad_cubic=grad_cubic, hess_cubic=hess_cubic, grad_H_normal=grad_H_normal,
                   grad_eta=grad_eta, hess_eta=hess_eta, grad_h2=grad_h2, grad_H_normal2=grad_H_normal2)


def compute_bundle(m, derivatives=True):
    """
    metric_and_connection, second_fundamental and optionally covariant_derivatives in one call
    """
    bundle = second_fundamental(m, metric_and_connection(m))
    if derivatives:
        bundle = covariant_derivatives(bundle)
    return bundle


def _ensure_derivatives(b):
    return b if b.has_derivatives else covariant_derivatives(b)


def normal_curvature(b):
    """
    <R^perp(d_1, d_2) N_k, N_l> computed from the normal connection of the basis N_k = J x_*d_k.

    Returns:
        array [..., k, l]
    """
    spec = b.spec
    normals = tensors.complex_structure(b.metric.frame)
    gram_n = tensors.gram(normals)
    gram_n_inv, _ = tensors.inverse_2x2(gram_n)
    dN = np.einsum('xykaj->xyjka', tensors.partials(normals, spec))
    omega = np.einsum('xyjka,xyla,xyml->xyjkm', dN, normals, gram_n_inv)
    d1_omega2 = grid.derivative(omega[:, :, 1], spec, 0)
    d2_omega1 = grid.derivative(omega[:, :, 0], spec, 1)
    curvature = (d1_omega2 - d2_omega1 + np.einsum('xykp,xypm->xykm', omega[:, :, 1], omega[:, :, 0])
                 - np.einsum('xykp,xypm->xykm', omega[:, :, 0], omega[:, :, 1]))
    return np.einsum('xykm,xyml->xykl', curvature, gram_n)


def _gauss_residual(b):
    sff = b.sff
    extrinsic = tensors.inner(sff[..., 1, 1, :], sff[..., 0, 0, :]) - tensors.inner(sff[..., 0, 1, :], sff[..., 0, 1, :])
    return util.normalized_residual(b.K * b.metric.det, extrinsic)


def _ricci_residual(b, measured):
    C, g_inv = b.cubic.C, b.metric.g_inv
    commutator = (np.einsum('xykm,xymn,xyln->xykl', C[:, :, 1], g_inv, C[:, :, 0])
                  - np.einsum('xykm,xymn,xyln->xykl', C[:, :, 0], g_inv, C[:, :, 1]))
    return util.normalized_residual(measured, commutator)


def _normal_tangent_residual(b, measured):
    g = b.metric.g
    intrinsic = b.K[..., None, None] * (np.einsum('xyk,xyl->xykl', g[:, :, 1], g[:, :, 0])
                                        - np.einsum('xyk,xyl->xykl', g[:, :, 0], g[:, :, 1]))
    return util.normalized_residual(measured, intrinsic)


def _motion_residual(b):
    metric = b.metric
    tangential = np.einsum('xykij,xyka->xyija', metric.christoffel, metric.frame)
    gauss_formula = util.normalized_residual(b.second_derivatives - tangential, b.sff)
    normals = tensors.complex_structure(metric.frame)
    dN = np.einsum('xylaj->xylja', tensors.partials(normals, b.spec))
    connection = np.einsum('xyklj,xyka->xylja', metric.christoffel, normals)
    shape = -np.einsum('xyljm,xymn,xyna->xylja', b.cubic.C, metric.g_inv, metric.frame)
    weingarten = util.normalized_residual(dN, connection + shape)
    return max(gauss_formula, weingarten)


def _ricci_identity_residual(b):
    C, g, K = b.cubic.C, b.metric.g, b.K
    hess = b.hess_cubic
    lhs = hess - np.swapaxes(hess, -1, -2)
    # index order of every term: i, j, l, p, q
    terms = (np.einsum('xypi,xyqjl->xyijlpq', g, C) - np.einsum('xyqi,xypjl->xyijlpq', g, C)
             + np.einsum('xypj,xyiql->xyijlpq', g, C) - np.einsum('xyqj,xyipl->xyijlpq', g, C)
             + np.einsum('xypl,xyijq->xyijlpq', g, C) - np.einsum('xyql,xyijp->xyijlpq', g, C))
    rhs = -K[..., None, None, None, None, None] * terms
    return util.normalized_residual(lhs, rhs)


def curvature_residuals(b):
    """
    Residuals of the structure equations of the immersion, each normalized as
    sup|lhs - rhs| / (1 + max(sup|lhs|, sup|rhs|)).

    Keys: gauss (K det g against <h22, h11> - |h12|^2), ricci (normal curvature against the h-commutator),
    codazzi (symmetry of nabla C in its last two slots), eq2.13 (normal against tangent curvature),
    motion (Gauss and Weingarten formulas of the coordinate frame), eq2.10 (2K against |H|^2 - |h|^2),
    ricci_identity (commutator of second covariant derivatives of C), cubic_symmetry (raw asymmetry of C).

    Args:
        :b: GeometryBundle; covariant derivatives are computed when missing

    Returns:
        dict identity id -> residual, in constants.IDENTITIES.CURVATURE order
    """
    b = _ensure_derivatives(b)
    measured = normal_curvature(b)
    residuals = {
        constants.IDENTITIES.GAUSS: _gauss_residual(b),
        constants.IDENTITIES.RICCI: _ricci_residual(b, measured),
        constants.IDENTITIES.CODAZZI: util.normalized_residual(b.grad_cubic, np.swapaxes(b.grad_cubic, -1, -2)),
        constants.IDENTITIES.EQ_2_13: _normal_tangent_residual(b, measured),
        constants.IDENTITIES.MOTION: _motion_residual(b),
        constants.IDENTITIES.EQ_2_10: util.normalized_residual(2.0 * b.K, b.H2 - b.h2),
        constants.IDENTITIES.RICCI_IDENTITY: _ricci_identity_residual(b),
        constants.IDENTITIES.CUBIC_SYMMETRY: b.cubic.asymmetry,
    }
    for key, value in residuals.items():
        log.debug("Curvature residual {}: {}".format(key, value))
    return residuals


def orthonormal_frame(metric):
    """
    Positively oriented Gram-Schmidt frame of (x_*d_u, x_*d_v).

    Args:
        :metric: MetricField

    Returns:
        (components, vectors): components[..., a, i] is the d_i component of e_a and vectors[..., a, :]
        the ambient vector e_a
    """
    components = tensors.orthonormal_frame(metric.g)
    vectors = np.einsum('xyai,xyib->xyab', components, metric.frame)
    return components, vectors


def _require_lagrangian(b, tolerance, what):
    if tolerance is None:
        tolerance = util.get_tolerances().lagrangian
    if b.lagrangian_residual > tolerance:
        raise NotLagrangianError("{} needs a Lagrangian surface, residual {} > {}".format(
            what, b.lagrangian_residual, tolerance))


def maslov(m, b, tolerance=None):
    """
    Lagrangian angle and Maslov form.

    beta = arg Omega(e_1, e_2) with Omega = dz1 ^ dz2 and (e_1, e_2) the oriented Gram-Schmidt frame;
    alpha(d_i) = -<JH, x_*d_i>; periods integrate alpha along coordinate lines, averaged over lines and
    divided by 2 pi. d beta is unwrapped locally as Im(d omega / omega) with omega = e^{i beta}.

    Args:
        :m: the ImmersionGrid
        :b: its GeometryBundle
        :tolerance: Lagrangian tolerance, from util.get_tolerances() when omitted

    Returns:
        MaslovData

    Raises:
        :NotLagrangianError: if the surface is not Lagrangian within tolerance
    """
    _require_lagrangian(b, tolerance, "Maslov data")
    spec = b.spec
    _, e = orthonormal_frame(b.metric)
    z1 = e[..., 0] + 1j * e[..., 1]
    z2 = e[..., 2] + 1j * e[..., 3]
    omega = z1[..., 0] * z2[..., 1] - z2[..., 0] * z1[..., 1]
    omega = omega / np.abs(omega)
    beta = np.mod(np.angle(omega), 2 * np.pi)

    parts = np.stack([omega.real, omega.imag], axis=-1)
    d_parts = tensors.partials(parts, spec)
    d_omega = d_parts[..., 0, :] + 1j * d_parts[..., 1, :]
    dbeta = np.imag(d_omega / omega[..., None])

    JH = tensors.complex_structure(b.H)
    alpha = -np.einsum('xya,xyia->xyi', JH, b.metric.frame)
    period_u = float(np.mean(np.sum(alpha[..., 0], axis=0) * spec.du)) / (2 * np.pi)
    period_v = float(np.mean(np.sum(alpha[..., 1], axis=1) * spec.dv)) / (2 * np.pi)

    grad_beta = np.einsum('xyij,xyj->xyi', b.metric.g_inv, dbeta)
    pushed = np.einsum('xyi,xyia->xya', grad_beta, b.metric.frame)
    data = MaslovData(beta=beta, alpha=alpha, dbeta=dbeta, periods=(period_u, period_v),
                      consistency_residual=util.normalized_residual(dbeta, alpha),
                      theorem_residual=util.normalized_residual(pushed, -JH))
    log.info("Maslov periods {} (integrality residual {})".format(data.periods, data.integrality_residual))
    return data


def diagonalize_frame(b, pre_rotation=0.0, flatness=constants.TOLERANCES.FLATNESS):
    """
    Rotation angle of the orthonormal frame that makes the cubic form diagonal, h~_12^{k*} = 0.

    With A_c = [[p, q], [q, r]] the matrix of C(., ., e_c), the rotated off-diagonal entry is
    q cos 2t + (p - r)/2 sin 2t. The direction (cos 2t, sin 2t) minimizing the sum of squares over c is
    the eigenvector of the smallest eigenvalue of sum_c [q, d]^T [q, d]; t is reported in [0, pi/2).

    Args:
        :b: GeometryBundle of a flat surface
        :pre_rotation: angle by which the Gram-Schmidt frame is rotated before diagonalizing
        :flatness: bound on max|K|

    Returns:
        (theta Field, residual) where residual is the sup of |C~112| and |C~122| in the rotated frame

    Raises:
        :HypothesisError: if max|K| exceeds the flatness bound
    """
    max_curvature = util.sup_norm(b.K)
    if max_curvature > flatness:
        raise HypothesisError("Frame diagonalization needs a flat surface, max|K| = {} > {}".format(
            max_curvature, flatness))
    components, _ = orthonormal_frame(b.metric)
    if pre_rotation:
        components = np.einsum('xyab,xybi->xyai', tensors.rotation(np.full(b.spec.shape, float(pre_rotation))),
                               components)
    cubic = tensors.to_frame(b.cubic.C, components)
    p = cubic[..., 0, 0, :]
    q = cubic[..., 0, 1, :]
    r = cubic[..., 1, 1, :]
    d = 0.5 * (p - r)
    moments = np.stack([np.stack([np.sum(q * q, axis=-1), np.sum(q * d, axis=-1)], axis=-1),
                        np.stack([np.sum(q * d, axis=-1), np.sum(d * d, axis=-1)], axis=-1)], axis=-2)
    _, vectors = np.linalg.eigh(moments)
    direction = vectors[..., :, 0]
    theta = 0.5 * np.arctan2(direction[..., 1], direction[..., 0])
    theta = np.where(np.all(moments == 0, axis=(-1, -2)), 0.0, np.mod(theta, np.pi / 2))
    rotated = tensors.to_frame(cubic, tensors.rotation(theta))
    residual = max(util.sup_norm(rotated[..., 0, 0, 1]), util.sup_norm(rotated[..., 0, 1, 1]))
    log.info("Diagonalizing frame residual {}".format(residual))
    return grid.Field(b.spec, theta), float(residual)
