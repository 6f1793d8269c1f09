"""
Identity battery for Lagrangian xi-surfaces.

Each check returns sup|lhs - rhs| / (1 + max(sup|lhs|, sup|rhs|)). Frame sums are evaluated tensorially:
with V_n = <V, J x_*d_n>, A^V_ij = C_ijm g^mn V_n and Q(V, W) = g^ia g^jb A^V_ij A^W_ab,

    sum h_ij^k h_ij^l V^k W^l             = Q(V, W)
    sum h_ij^k <x, e_i><x, e_j> V^k       = A^V_ij t^i t^j
    sum h_il^k h_lj^k <x, e_i><x, e_j>    = g^ab t^i t^j C_iam g^mn C_jbn
"""

import numpy as np

from xigeo import constants, drift, util
from xigeo.geometry_impl import tensors


def _lhs_rhs_residual(lhs, rhs):
    return util.normalized_residual(lhs, rhs)


def _context(b, e):
    """
    Shared quantities: t^i, V = H - xi (as normal components), H and xi normal components
    """
    g_inv = b.metric.g_inv
    frame = b.metric.frame
    difference = b.H - e.xi_hat
    return {
        "t_up": b.tangent_position_up,
        "v": tensors.normal_components(difference, frame),
        "eta": b.eta,
        "xi": tensors.normal_components(e.xi_hat, frame),
        "H_dot_v": tensors.inner(b.H, difference),
        "H_dot_xi": tensors.inner(b.H, e.xi_hat),
        "g_inv": g_inv,
    }


def div_jh(m, b, e, maslov_data):
    """
    div JH = <JH, x^T>
    """
    JH = tensors.complex_structure(b.H)
    components = tensors.tangent_components(JH, b.metric.frame, b.metric.g_inv)
    nabla = tensors.covariant_derivative_vector(components, b.metric.christoffel, b.spec)
    divergence = np.einsum('xyii->xy', nabla)
    return _lhs_rhs_residual(divergence, tensors.inner(JH, b.x_top))


def angle_laplacian(m, b, e, maslov_data):
    """
    Laplace beta = <grad beta, x^T>, with d beta locally unwrapped
    """
    dbeta = maslov_data.dbeta
    hessian = tensors.covariant_derivative(dbeta, b.metric.christoffel, b.spec)
    laplacian = np.einsum('xyij,xyij->xy', b.metric.g_inv, hessian)
    rhs = np.einsum('xyij,xyi,xyj->xy', b.metric.g_inv, dbeta, b.tangent_position)
    return _lhs_rhs_residual(laplacian, rhs)


def mean_curvature_gradient(m, b, e, maslov_data):
    """
    nabla^perp_i H = t^j h(d_i, d_j)
    """
    rhs = np.einsum('xyj,xyija->xyia', b.tangent_position_up, b.sff)
    return _lhs_rhs_residual(b.grad_H_normal, rhs)


def mean_curvature_hessian(m, b, e, maslov_data):
    """
    (nabla^2 eta)_kij = (nabla C)_imkj t^m + C_ijk - g^mn C_imk A^{H-xi}_nj, eta_k = <H, N_k>
    """
    ctx = _context(b, e)
    C = b.cubic.C
    shape = tensors.shape_tensor(C, ctx["g_inv"], ctx["v"])
    rhs = (np.einsum('xyimkj,xym->xykij', b.grad_cubic, ctx["t_up"])
           + np.einsum('xyijk->xykij', C)
           - np.einsum('xymn,xyimk,xynj->xykij', ctx["g_inv"], C, shape))
    return _lhs_rhs_residual(b.hess_eta, rhs)


def pinching_drift(m, b, e, maslov_data):
    """
    1/2 L(|h|^2 + |H - xi|^2) against its expansion in |nabla h|^2, |nabla^perp H|^2 and Q
    """
    ctx = _context(b, e)
    C, g_inv = b.cubic.C, ctx["g_inv"]
    difference2 = tensors.inner(b.H - e.xi_hat, b.H - e.xi_hat)
    lhs = 0.5 * drift.drift_laplacian(m, b, b.h2 + difference2).drift
    h2, H2, H_dot_v = b.h2, b.H2, ctx["H_dot_v"]
    rhs = (b.grad_h2 + b.grad_H_normal2 + h2
           - 0.5 * (h2 - H2) * (3.0 * h2 - 2.0 * H2 + H_dot_v)
           + H_dot_v
           - tensors.quadratic_pairing(C, g_inv, ctx["v"], ctx["v"])
           - tensors.quadratic_pairing(C, g_inv, ctx["eta"], ctx["v"]))
    return _lhs_rhs_residual(lhs, rhs)


def tangent_position_laplacian(m, b, e, maslov_data):
    """
    1/2 Laplace |x^T|^2 against A^{xi-H}(t, t) - g^ab t^i t^j <h_ia, h_jb> + 2 - 2<H, H - xi> + Q(H - xi, H - xi)
    """
    ctx = _context(b, e)
    C, g_inv, t_up = b.cubic.C, ctx["g_inv"], ctx["t_up"]
    top2 = np.einsum('xyi,xyi->xy', b.tangent_position, t_up)
    lhs = 0.5 * drift.drift_laplacian(m, b, top2).laplacian
    shape = tensors.shape_tensor(C, g_inv, ctx["v"])
    rhs = (-np.einsum('xyij,xyi,xyj->xy', shape, t_up, t_up)
           - np.einsum('xyab,xyi,xyj,xyiam,xymn,xyjbn->xy', g_inv, t_up, t_up, C, g_inv, C)
           + 2.0 - 2.0 * ctx["H_dot_v"]
           + tensors.quadratic_pairing(C, g_inv, ctx["v"], ctx["v"]))
    return _lhs_rhs_residual(lhs, rhs)


def mean_curvature_pairing(m, b, e, maslov_data):
    """
    L<H, xi> = <H, xi> - Q(xi, H - xi)
    """
    ctx = _context(b, e)
    lhs = drift.drift_laplacian(m, b, ctx["H_dot_xi"]).drift
    rhs = ctx["H_dot_xi"] - tensors.quadratic_pairing(b.cubic.C, ctx["g_inv"], ctx["xi"], ctx["v"])
    return _lhs_rhs_residual(lhs, rhs)


def position_laplacian(m, b, e, maslov_data):
    """
    1/2 Laplace |x|^2 = 2 - <H, H - xi>
    """
    ctx = _context(b, e)
    lhs = 0.5 * drift.drift_laplacian(m, b, b.position_squared).laplacian
    return _lhs_rhs_residual(lhs, 2.0 - ctx["H_dot_v"])


def position_drift(m, b, e, maslov_data):
    """
    1/2 L|x|^2 = |xi|^2 + 2 - (|x|^2 + <H, xi>)
    """
    ctx = _context(b, e)
    lhs = 0.5 * drift.drift_laplacian(m, b, b.position_squared).drift
    rhs = tensors.inner(e.xi_hat, e.xi_hat) + 2.0 - (b.position_squared + ctx["H_dot_xi"])
    return _lhs_rhs_residual(lhs, rhs)


def angle_gradient(m, b, e, maslov_data):
    """
    x_*(grad beta) = -JH
    """
    return maslov_data.theorem_residual


XI_CHECKS = {
    constants.IDENTITIES.EQ_2_17: div_jh,
    constants.IDENTITIES.EQ_2_18: angle_laplacian,
    constants.IDENTITIES.EQ_3_2: mean_curvature_gradient,
    constants.IDENTITIES.EQ_3_3: mean_curvature_hessian,
    constants.IDENTITIES.LEM_3_2: pinching_drift,
    constants.IDENTITIES.LEM_3_3: tangent_position_laplacian,
    constants.IDENTITIES.LEM_3_4: mean_curvature_pairing,
    constants.IDENTITIES.LEM_3_5A: position_laplacian,
    constants.IDENTITIES.LEM_3_5B: position_drift,
}

GENERAL_CHECKS = {
    constants.IDENTITIES.THM_2_1: angle_gradient,
}

NEEDS_MASLOV = {constants.IDENTITIES.EQ_2_18, constants.IDENTITIES.THM_2_1}
