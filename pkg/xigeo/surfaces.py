"""
Immersed tori in C^2: analytic families, file-loaded samples and the Lagrangian test.

Ambient coordinates are ordered (Re z1, Im z1, Re z2, Im z2). Example usage:

>>> from xigeo import grid, surfaces
>>> torus = surfaces.make_product_torus(1.0, 2.0, grid.GridSpec(64, 64))
>>> surfaces.lagrangian_residual(torus)
"""

import logging
from dataclasses import dataclass, field

import numpy as np
from scipy.stats import unitary_group

from xigeo import constants, grid
from xigeo.exceptions import ParameterError, ClosureError, DegenerateMetricError, GridError
from xigeo.geometry_impl import tensors

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class ImmersionGrid:
    """
    Sampled immersion x: T^2 -> C^2.

    provenance is a dict holding at least a "family" key plus the family parameters.
    """
    spec: grid.GridSpec
    x: np.ndarray
    provenance: dict = field(default_factory=lambda: {"family": constants.FAMILIES.EXTERNAL})

    def __post_init__(self):
        x = np.asarray(self.x, dtype=float)
        if x.shape != self.spec.shape + (4,):
            raise GridError("Immersion samples must have shape {}, got: {}".format(self.spec.shape + (4,), x.shape))
        grid.check_finite(x, "immersion")
        object.__setattr__(self, "x", x)

    @property
    def family(self):
        return self.provenance.get("family", constants.FAMILIES.EXTERNAL)

    def position(self):
        return grid.Field(self.spec, self.x)

    def frame(self):
        """
        Returns:
            the coordinate frame x_*d_u, x_*d_v stacked as (nu, nv, 2, 4)
        """
        return np.stack([grid.derivative(self.x, self.spec, 0), grid.derivative(self.x, self.spec, 1)], axis=-2)


def _check_positive(name, value):
    if not np.isfinite(value) or value <= 0:
        raise ParameterError("Parameter {} must be positive, got: {}".format(name, value))


def make_product_torus(a, b, spec):
    """
    The product torus S^1(a) x S^1(b), x(u, v) = (a e^{iu}, b e^{iv})

    Args:
        :a: radius of the first circle
        :b: radius of the second circle
        :spec: grid with periods (2 pi, 2 pi)

    Returns:
        an ImmersionGrid

    Raises:
        :ParameterError: if a or b is not positive or the periods are not 2 pi
    """
    _check_positive("a", a)
    _check_positive("b", b)
    if not (np.isclose(spec.period_u, 2 * np.pi) and np.isclose(spec.period_v, 2 * np.pi)):
        raise ParameterError("Product torus needs periods (2pi, 2pi), got: ({}, {})".format(
            spec.period_u, spec.period_v))
    u, v = spec.mesh()
    x = np.stack([a * np.cos(u), a * np.sin(u), b * np.cos(v), b * np.sin(v)], axis=-1)
    log.info("Built product torus a={} b={} on {}x{} grid".format(a, b, spec.nu, spec.nv))
    return ImmersionGrid(spec, x, {"family": constants.FAMILIES.PRODUCT_TORUS, "a": float(a), "b": float(b)})


def _check_closed(c, label):
    if not c.closed:
        raise ClosureError("Curve {} is not closed, gap: {}".format(label, c.closure_gap), gap=c.closure_gap)


def make_product_curves(c1, c2, provenance=None):
    """
    Product x(u, v) = (gamma_1(u), gamma_2(v)) of two closed arc-length sampled plane curves

    Args:
        :c1: first factor (PlaneCurve), sampled with nu points
        :c2: second factor (PlaneCurve), sampled with nv points
        :provenance: optional provenance dict, defaults to the product-curves family

    Returns:
        an ImmersionGrid on periods (L1, L2)

    Raises:
        :ClosureError: if either curve is open
    """
    _check_closed(c1, "c1")
    _check_closed(c2, "c2")
    spec = grid.GridSpec(c1.n, c2.n, c1.length, c2.length)
    x = np.empty(spec.shape + (4,))
    x[..., 0:2] = c1.gamma[:, None, :]
    x[..., 2:4] = c2.gamma[None, :, :]
    if provenance is None:
        provenance = {"family": constants.FAMILIES.PRODUCT_CURVES, "length_1": c1.length, "length_2": c2.length}
    return ImmersionGrid(spec, x, provenance)


def make_equivariant(c, spec, provenance=None):
    """
    Equivariant surface x(u, v) = (gamma(u) cos v, gamma(u) sin v) with gamma in C

    Args:
        :c: closed arc-length sampled PlaneCurve avoiding the origin
        :spec: grid whose nu matches the curve samples; the periods used are (L, 2 pi)
        :provenance: optional provenance dict

    Returns:
        an ImmersionGrid

    Raises:
        :DegenerateMetricError: if the curve passes within the origin clearance
        :ClosureError: if the curve is open
    """
    _check_closed(c, "c")
    if spec.nu != c.n:
        raise GridError("Equivariant surface needs nu equal to the curve samples ({}), got: {}".format(c.n, spec.nu))
    radius = np.hypot(c.gamma[:, 0], c.gamma[:, 1])
    index = int(np.argmin(radius))
    if radius[index] < constants.TOLERANCES.ORIGIN_CLEARANCE:
        raise DegenerateMetricError("Equivariant profile passes through the origin: |gamma| = {} at sample {}".format(
            radius[index], index), min_value=float(radius[index]), location=(index, 0))
    full = grid.GridSpec(c.n, spec.nv, c.length, 2 * np.pi)
    _, v = full.points()
    cos_v = np.cos(v)[None, :]
    sin_v = np.sin(v)[None, :]
    g1 = c.gamma[:, 0][:, None]
    g2 = c.gamma[:, 1][:, None]
    x = np.stack([g1 * cos_v, g2 * cos_v, g1 * sin_v, g2 * sin_v], axis=-1)
    if provenance is None:
        provenance = {"family": constants.FAMILIES.EQUIVARIANT, "length": c.length}
    return ImmersionGrid(full, x, provenance)


def make_clifford_like(x_fn, spec, provenance=None):
    """
    Builds an immersion from any vectorized map (u, v) -> R^4

    >>> surfaces.make_clifford_like(lambda u, v: (np.cos(u), np.cos(v), np.sin(u), np.sin(v)), spec)

    Args:
        :x_fn: callable taking the (nu, nv) meshes U, V and returning four arrays or one (nu, nv, 4) array
        :spec: the GridSpec
        :provenance: optional provenance dict, defaults to the custom family

    Returns:
        an ImmersionGrid
    """
    u, v = spec.mesh()
    values = x_fn(u, v)
    if isinstance(values, (tuple, list)):
        values = np.stack([np.broadcast_to(np.asarray(c, dtype=float), spec.shape) for c in values], axis=-1)
    if provenance is None:
        provenance = {"family": constants.FAMILIES.CUSTOM}
    return ImmersionGrid(spec, values, provenance)


def lagrangian_residual(m):
    """
    max over the grid of |omega(x_u, x_v)| / (|x_u| |x_v|)

    Args:
        :m: the ImmersionGrid

    Returns:
        the residual, 0 for Lagrangian surfaces

    Raises:
        :DegenerateMetricError: if x_u or x_v vanishes somewhere
    """
    frame = m.frame()
    norms = np.sqrt(tensors.inner(frame, frame))
    grid.check_positive(norms[..., 0] * norms[..., 1], "coordinate speed |x_u||x_v|")
    omega = tensors.symplectic_form(frame[..., 0, :], frame[..., 1, :])
    return float(np.max(np.abs(omega) / (norms[..., 0] * norms[..., 1])))


def unitary_as_real(unitary):
    """
    Real 4x4 matrix of a complex 2x2 matrix acting on (z1, z2) in the (Re z1, Im z1, Re z2, Im z2) order
    """
    unitary = np.asarray(unitary)
    if unitary.shape == (4, 4) and not np.iscomplexobj(unitary):
        return unitary.astype(float)
    if unitary.shape != (2, 2):
        raise ParameterError("Expected a 2x2 complex or 4x4 real matrix, got shape: {}".format(unitary.shape))
    real = np.zeros((4, 4))
    for a in range(2):
        for b in range(2):
            entry = complex(unitary[a, b])
            real[2 * a:2 * a + 2, 2 * b:2 * b + 2] = [[entry.real, -entry.imag], [entry.imag, entry.real]]
    return real


def random_unitary(seed):
    """
    Reproducible Haar-random unitary of C^2 as a complex 2x2 matrix
    """
    return unitary_group.rvs(2, random_state=seed)


def apply_unitary(m, unitary):
    """
    Applies a unitary transformation of C^2 to the immersion

    Args:
        :m: the ImmersionGrid
        :unitary: 2x2 complex unitary (or its real 4x4 form)

    Returns:
        the transformed ImmersionGrid

    Raises:
        :ParameterError: if the matrix is not unitary or does not commute with J
    """
    real = unitary_as_real(unitary)
    if not np.allclose(real @ real.T, np.eye(4), atol=1e-10):
        raise ParameterError("Matrix is not orthogonal: |U U^T - I| = {}".format(np.max(np.abs(real @ real.T - np.eye(4)))))
    j = tensors.complex_structure(np.eye(4)).T
    if not np.allclose(real @ j, j @ real, atol=1e-10):
        raise ParameterError("Matrix does not commute with the complex structure")
    provenance = dict(m.provenance, unitary=True)
    return ImmersionGrid(m.spec, m.x @ real.T, provenance)


def translate(m, c):
    """
    Translates the immersion by a constant vector c of R^4
    """
    c = np.asarray(c, dtype=float)
    if c.shape != (4,):
        raise ParameterError("Translation must be a vector of length 4, got shape: {}".format(c.shape))
    provenance = dict(m.provenance, translation=[float(value) for value in c])
    return ImmersionGrid(m.spec, m.x + c, provenance)


def shift_origin(m, du_steps, dv_steps):
    """
    Reparametrizes by (u, v) -> (u + du_steps*du, v + dv_steps*dv), an exact roll of the samples
    """
    x = np.roll(m.x, shift=(-int(du_steps), -int(dv_steps)), axis=(0, 1))
    return ImmersionGrid(m.spec, x, dict(m.provenance))
