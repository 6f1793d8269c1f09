"""
Doubly periodic sampling grids and Fourier-spectral calculus on the parameter torus.

Fields are numpy arrays whose first two axes run over the (u, v) samples; trailing axes hold vector or
tensor components. The public operations take and return Field records, the array-level helpers
(derivative, quadrature) are what the geometry kernel uses internally.
"""

import logging
from dataclasses import dataclass

import numpy as np

from xigeo import constants
from xigeo.exceptions import GridError, DegenerateMetricError

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class GridSpec:
    """
    Uniform periodic grid u_p = p*period_u/nu, v_q = q*period_v/nv (no endpoint duplication).
    """
    nu: int
    nv: int
    period_u: float = 2 * np.pi
    period_v: float = 2 * np.pi

    def __post_init__(self):
        for name in ("nu", "nv"):
            value = getattr(self, name)
            if int(value) != value or value < constants.GRID.MIN_SAMPLES:
                raise GridError("Grid size {} must be an integer >= {}, got: {}".format(
                    name, constants.GRID.MIN_SAMPLES, value))
        for name in ("period_u", "period_v"):
            value = getattr(self, name)
            if not np.isfinite(value) or value <= 0:
                raise GridError("Grid {} must be positive and finite, got: {}".format(name, value))

    @property
    def du(self):
        return self.period_u / self.nu

    @property
    def dv(self):
        return self.period_v / self.nv

    @property
    def shape(self):
        return (self.nu, self.nv)

    def points(self):
        """
        Returns:
            the sample coordinates (u, v) as two 1-D arrays
        """
        return np.arange(self.nu) * self.du, np.arange(self.nv) * self.dv

    def mesh(self):
        """
        Returns:
            two (nu, nv) arrays U, V with U[p, q] = u_p and V[p, q] = v_q
        """
        u, v = self.points()
        return np.meshgrid(u, v, indexing="ij")


@dataclass(frozen=True)
class Field:
    """
    Values sampled on a grid; values has shape (nu, nv) for scalars or (nu, nv, d) for vectors.
    """
    spec: GridSpec
    values: np.ndarray

    def __post_init__(self):
        values = np.asarray(self.values, dtype=float)
        if values.shape[:2] != self.spec.shape:
            raise GridError("Field shape {} does not match grid {}".format(values.shape, self.spec.shape))
        check_finite(values)
        object.__setattr__(self, "values", values)

    @property
    def dim(self):
        return 1 if self.values.ndim == 2 else int(np.prod(self.values.shape[2:]))


def check_finite(values, what="field"):
    """
    Raises GridError naming the first grid index holding a non-finite value

    Args:
        :values: array whose first two axes are the grid axes
        :what: label used in the error message
    """
    finite = np.isfinite(values)
    if not np.all(finite):
        bad = np.argwhere(~finite)[0]
        raise GridError("Non-finite value in {} at grid index ({}, {})".format(what, int(bad[0]), int(bad[1])))


def _wavenumbers(n, period, order):
    k = 2 * np.pi / period * np.arange(n // 2 + 1)
    multiplier = (1j * k) ** order
    if order % 2 == 1 and n % 2 == 0:
        # the Nyquist mode has no odd derivative on a real grid
        multiplier[-1] = 0.0
    return multiplier


def derivative(values, spec, axis, order=1):
    """
    Fourier-spectral derivative of a sampled array along one grid axis.

    Args:
        :values: array of shape (nu, nv, ...)
        :spec: the GridSpec the values live on
        :axis: 0 / "u" or 1 / "v"
        :order: derivative order (1 or 2; higher orders are accepted)

    Returns:
        array with the same shape as values

    Raises:
        :GridError: if values contain non-finite entries
    """
    if isinstance(axis, str):
        if axis not in constants.GRID.AXIS_NAMES:
            raise GridError("Unknown axis {}, expected one of {}".format(axis, sorted(constants.GRID.AXIS_NAMES)))
        axis = constants.GRID.AXIS_NAMES[axis]
    values = np.asarray(values, dtype=float)
    check_finite(values)
    period = spec.period_u if axis == constants.GRID.U_AXIS else spec.period_v
    return periodic_derivative(values, period, axis, order)


def periodic_derivative(values, period, axis=0, order=1):
    """
    Spectral derivative of uniformly sampled periodic data along one axis (no finiteness check)
    """
    if order < 1:
        raise GridError("Derivative order must be >= 1, got: {}".format(order))
    n = values.shape[axis]
    multiplier = _wavenumbers(n, period, order)
    shape = [1] * values.ndim
    shape[axis] = multiplier.size
    coefficients = np.fft.rfft(values, axis=axis) * multiplier.reshape(shape)
    return np.fft.irfft(coefficients, n=n, axis=axis)


def gradient(values, spec):
    """
    Returns:
        the parameter gradient stacked on a new trailing axis: result[..., 0] = d/du, result[..., 1] = d/dv
    """
    return np.stack([derivative(values, spec, 0), derivative(values, spec, 1)], axis=-1)


def differentiate(f, axis, order=1):
    """
    Spectral derivative of a Field, componentwise.

    >>> from xigeo import grid
    >>> spec = grid.GridSpec(32, 32)
    >>> u, v = spec.mesh()
    >>> grid.differentiate(grid.Field(spec, np.sin(u)), "u").values  # cos(u)

    Args:
        :f: a Field
        :axis: "u" or "v"
        :order: 1 or 2

    Returns:
        a new Field on the same grid
    """
    return Field(f.spec, derivative(f.values, f.spec, axis, order))


def quadrature(values, area_element, spec):
    """
    Periodic trapezoidal rule sum(values * area_element) * du * dv, summed in row-major order.
    """
    integrand = np.ascontiguousarray(np.asarray(values, dtype=float) * area_element)
    return float(np.sum(integrand.ravel())) * spec.du * spec.dv


def integrate(f, area_element):
    """
    Integral of a scalar field against an area element over the parameter torus.

    Args:
        :f: scalar Field
        :area_element: scalar Field (or array) that must be positive everywhere

    Returns:
        the integral as a float

    Raises:
        :DegenerateMetricError: if the area element is not positive somewhere
    """
    spec = f.spec
    area = area_element.values if isinstance(area_element, Field) else np.asarray(area_element, dtype=float)
    area = np.broadcast_to(area, spec.shape)
    if f.values.ndim != 2:
        raise GridError("integrate expects a scalar field, got shape {}".format(f.values.shape))
    check_positive(area, "area element")
    return quadrature(f.values, area, spec)


def check_positive(values, what):
    """
    Raises DegenerateMetricError with the minimum and its location if values is not strictly positive
    """
    location = np.unravel_index(int(np.argmin(values)), values.shape)
    minimum = float(values[location])
    if not minimum > 0:
        raise DegenerateMetricError("Non-positive {}: minimum {} at grid index {}".format(
            what, minimum, tuple(int(i) for i in location)), min_value=minimum, location=tuple(int(i) for i in location))
