"""
Tensor helpers for the geometry kernel.

Layout conventions (all arrays carry the (nu, nv) grid axes first):

    frame        (nu, nv, 2, 4)        frame[..., i, :] = x_*d_i
    sff          (nu, nv, 2, 2, 4)     h(d_i, d_j) as ambient vectors
    metric       (nu, nv, 2, 2)        g_ij
    christoffel  (nu, nv, 2, 2, 2)     G[..., k, i, j] = Gamma^k_ij
    tensors      (nu, nv, 2, ..., 2)   all indices down; a covariant derivative appends its slot last
"""

import numpy as np

from xigeo import grid


def complex_structure(v):
    """
    Applies J to ambient vectors: (a, b, c, d) -> (-b, a, -d, c)
    """
    v = np.asarray(v)
    out = np.empty_like(v)
    out[..., 0] = -v[..., 1]
    out[..., 1] = v[..., 0]
    out[..., 2] = -v[..., 3]
    out[..., 3] = v[..., 2]
    return out


def inner(a, b):
    """
    Euclidean inner product over the last axis
    """
    return np.sum(a * b, axis=-1)


def symplectic_form(a, b):
    """
    omega(X, Y) = <JX, Y>
    """
    return inner(complex_structure(a), b)


def inverse_2x2(m):
    """
    Returns:
        (inverse, determinant) of a field of symmetric 2x2 matrices
    """
    det = m[..., 0, 0] * m[..., 1, 1] - m[..., 0, 1] * m[..., 1, 0]
    inv = np.empty_like(m)
    inv[..., 0, 0] = m[..., 1, 1] / det
    inv[..., 1, 1] = m[..., 0, 0] / det
    inv[..., 0, 1] = -m[..., 0, 1] / det
    inv[..., 1, 0] = -m[..., 1, 0] / det
    return inv, det


def gram(vectors):
    """
    Gram matrix <v_i, v_j> of a (nu, nv, 2, 4) family of ambient vectors
    """
    return np.einsum('xyia,xyja->xyij', vectors, vectors)


def partials(values, spec):
    """
    All first partial derivatives of a field, derivative index appended last
    """
    return grid.gradient(values, spec)


def christoffel_symbols(g, g_inv, spec):
    """
    Levi-Civita Christoffel symbols of the second kind from spectral derivatives of g.

    Returns:
        array G with G[..., k, i, j] = Gamma^k_ij
    """
    dg = partials(g, spec)  # dg[..., a, b, c] = d_c g_ab
    first_kind = 0.5 * (np.einsum('xyjli->xylij', dg) + np.einsum('xyilj->xylij', dg)
                        - np.einsum('xyijl->xylij', dg))
    return np.einsum('xykl,xylij->xykij', g_inv, first_kind)


def covariant_derivative(tensor, christoffel, spec):
    """
    Levi-Civita covariant derivative of an all-lower tensor field.

    (nabla T)_{a_1..a_r m} = d_m T_{a_1..a_r} - sum_s Gamma^p_{m a_s} T_{a_1..p..a_r}

    Args:
        :tensor: array of shape (nu, nv, 2, ..., 2)
        :christoffel: Christoffel array G[..., k, i, j]
        :spec: the GridSpec

    Returns:
        array of rank one higher, derivative slot last
    """
    rank = tensor.ndim - 2
    result = partials(tensor, spec)
    nu, nv = tensor.shape[:2]
    for slot in range(rank):
        moved = np.moveaxis(tensor, 2 + slot, -1)
        rest = moved.shape[2:-1]
        flat = moved.reshape(nu, nv, -1, 2)
        correction = np.einsum('xyrp,xypma->xyram', flat, christoffel)
        correction = correction.reshape((nu, nv) + rest + (2, 2))
        result = result - np.moveaxis(correction, -2, 2 + slot)
    return result


def covariant_derivative_vector(w, christoffel, spec):
    """
    Covariant derivative of a tangent vector field given by coordinate components w^i.

    Returns:
        array D with D[..., i, j] = nabla_j w^i = d_j w^i + Gamma^i_jk w^k
    """
    return partials(w, spec) + np.einsum('xyijk,xyk->xyij', christoffel, w)


def tangent_components(v, frame, g_inv):
    """
    Coordinate components V^i = g^ij <v, x_j> of the tangential part of ambient vectors v
    """
    return np.einsum('xyij,xy...j->xy...i', g_inv, np.einsum('xy...a,xyja->xy...j', v, frame))


def tangent_projection(v, frame, g_inv):
    """
    Tangential part of ambient vectors v (shape (nu, nv, ..., 4))
    """
    return np.einsum('xy...i,xyia->xy...a', tangent_components(v, frame, g_inv), frame)


def normal_projection(v, frame, g_inv):
    """
    Normal part of ambient vectors v (shape (nu, nv, ..., 4))
    """
    return v - tangent_projection(v, frame, g_inv)


def raise_all(tensor, g_inv):
    """
    Raises every index of an all-lower tensor field
    """
    rank = tensor.ndim - 2
    out = tensor
    for slot in range(rank):
        moved = np.moveaxis(out, 2 + slot, -1)
        moved = np.einsum('xy...a,xyab->xy...b', moved, g_inv)
        out = np.moveaxis(moved, -1, 2 + slot)
    return out


def full_norm_squared(tensor, g_inv):
    """
    |T|^2 for an all-lower tensor field, contracting every slot with g^-1
    """
    rank = tensor.ndim - 2
    raised = raise_all(tensor, g_inv)
    return np.sum((tensor * raised).reshape(tensor.shape[:2] + (2 ** rank,)), axis=-1)


def orthonormal_frame(g):
    """
    Gram-Schmidt orthonormal frame of (d_u, d_v), positively oriented.

    Returns:
        array E with E[..., a, i] the d_i component of e_a
    """
    g11 = g[..., 0, 0]
    g12 = g[..., 0, 1]
    det = g11 * g[..., 1, 1] - g12 * g12
    s = np.sqrt(det / g11)
    frame = np.zeros(g.shape)
    frame[..., 0, 0] = 1.0 / np.sqrt(g11)
    frame[..., 1, 0] = -g12 / (g11 * s)
    frame[..., 1, 1] = 1.0 / s
    return frame


def to_frame(tensor, frame):
    """
    Components of an all-lower tensor in the frame e_a = E_a^i d_i
    """
    rank = tensor.ndim - 2
    out = tensor
    for slot in range(rank):
        moved = np.moveaxis(out, 2 + slot, -1)
        moved = np.einsum('xy...i,xyai->xy...a', moved, frame)
        out = np.moveaxis(moved, -1, 2 + slot)
    return out


def rotation(theta):
    """
    Field of 2x2 matrices R with rows e~1 = cos(t) e1 - sin(t) e2 and e~2 = sin(t) e1 + cos(t) e2
    """
    c = np.cos(theta)
    s = np.sin(theta)
    return np.stack([np.stack([c, -s], axis=-1), np.stack([s, c], axis=-1)], axis=-2)


def normal_components(v, frame):
    """
    V_k = <v, J x_*d_k> for ambient vectors v
    """
    return np.einsum('xy...a,xyka->xy...k', v, complex_structure(frame))


def shape_tensor(cubic, g_inv, normal_coefficients):
    """
    A^V_ij = C_ijm g^mn V_n, the coordinate form of <h(d_i, d_j), V>
    """
    return np.einsum('xyijm,xymn,xyn->xyij', cubic, g_inv, normal_coefficients)


def quadratic_pairing(cubic, g_inv, v_components, w_components):
    """
    Q(V, W) = g^ia g^jb A^V_ij A^W_ab, the tensorial form of sum h_ij^k h_ij^l V^k W^l
    """
    a_v = shape_tensor(cubic, g_inv, v_components)
    a_w = shape_tensor(cubic, g_inv, w_components)
    return np.einsum('xyia,xyjb,xyij,xyab->xy', g_inv, g_inv, a_v, a_w)
