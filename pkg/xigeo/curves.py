"""
Plane curves and lambda-curves, i.e. curves with k + <gamma, J T> = lambda, and their products.

A lambda-curve with unit tangent T, normal n = JT and signed curvature k = <T', n> is integrated as

    gamma' = T,   T' = (lambda - <gamma, J T>) J T

in angle form T = (cos phi, sin phi), which keeps |T| = 1 exactly. Closed solutions are found by shooting
from a point (r0, 0) perpendicular to the first axis and matching the angle swept between two apexes.
"""

import logging
import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np
from scipy.interpolate import CubicSpline
from scipy.optimize import brentq

from xigeo import constants, grid, surfaces
from xigeo.exceptions import ParameterError, RefinementRequired, CertificationError, ClosureError

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class PlaneCurve:
    """
    Sampled plane curve. Closed curves are sampled at uniform arc length without repeating the first point,
    open trajectories keep both endpoints.
    """
    n: int
    length: float
    gamma: np.ndarray
    tangent: np.ndarray
    curvature: np.ndarray
    closed: bool
    closure_gap: float = 0.0

    def arclength_points(self):
        return np.arange(self.n) * self.length / self.n

    def tangent_residual(self):
        """
        Returns:
            max |d gamma/ds - T| measured spectrally, for closed curves
        """
        if not self.closed:
            raise ClosureError("Spectral tangent check needs a closed curve, gap: {}".format(self.closure_gap),
                               gap=self.closure_gap)
        derivative = grid.periodic_derivative(self.gamma, self.length, axis=0)
        return float(np.max(np.abs(derivative - self.tangent)))


@dataclass(frozen=True)
class LambdaShoot:
    """
    Outcome of shoot_closed. curve is None when no closed solution was found in the bracket.
    """
    lam: float
    r0: float
    rotation: Fraction
    curve: PlaneCurve
    closure_residual: float
    status: str
    swept_angle: float = float("nan")

    @property
    def found(self):
        return self.status == constants.REPORT.STATUS_FOUND


@dataclass(frozen=True)
class CertifiedSurface:
    """
    Product of two lambda-curves together with its analytic xi field
    """
    surface: surfaces.ImmersionGrid
    xi: np.ndarray
    lambdas: tuple
    curves: tuple


def _rotate(v):
    return np.stack([-v[..., 1], v[..., 0]], axis=-1)


def circle_lambda(r):
    """
    lambda = 1/r - r, the value for which the centered circle of radius r is a lambda-curve

    >>> curves.circle_lambda(2.0)
    -1.5
    """
    if not r > 0:
        raise ParameterError("Circle radius must be positive, got: {}".format(r))
    return 1.0 / r - r


def circle_radius(lam):
    """
    Positive root of r^2 + lambda r - 1 = 0, the inverse of circle_lambda
    """
    return (-lam + math.sqrt(lam * lam + 4.0)) / 2.0


def circle(r, n=constants.CURVES.DEFAULT_SAMPLES):
    """
    Counterclockwise centered circle of radius r sampled at uniform arc length
    """
    if not r > 0:
        raise ParameterError("Circle radius must be positive, got: {}".format(r))
    if n < constants.GRID.MIN_SAMPLES:
        raise ParameterError("Curve needs at least {} samples, got: {}".format(constants.GRID.MIN_SAMPLES, n))
    angle = 2 * np.pi * np.arange(n) / n
    gamma = r * np.stack([np.cos(angle), np.sin(angle)], axis=-1)
    tangent = np.stack([-np.sin(angle), np.cos(angle)], axis=-1)
    return PlaneCurve(n, 2 * np.pi * r, gamma, tangent, np.full(n, 1.0 / r), True, 0.0)


def _fourier(z):
    """
    Complex Fourier coefficients of periodic samples z on [0, 2 pi), Nyquist mode dropped
    """
    m = z.size
    coefficients = np.fft.fft(z) / m
    modes = np.fft.fftfreq(m, 1.0 / m)
    if m % 2 == 0:
        coefficients[m // 2] = 0.0
    return modes, coefficients


def _evaluate(modes, coefficients, t, order=0):
    phases = np.exp(1j * np.outer(t, modes))
    return phases @ (coefficients * (1j * modes) ** order)


def _from_coefficients(modes, coefficients, n, oversample=constants.CURVES.ARCLENGTH_OVERSAMPLE):
    """
    Arc-length sampling of the closed curve z(t) = sum c_k e^{ikt}.

    s(t) is the integral of the speed, represented spectrally on an oversampled grid; a cubic
    spline of t(s) gives the initial guess and Newton iterations on the trigonometric interpolant refine it.
    """
    fine = oversample * max(2 * int(np.max(np.abs(modes))) + 1, n)
    t_fine = 2 * np.pi * np.arange(fine) / fine
    speed = np.abs(_evaluate(modes, coefficients, t_fine, order=1))
    if np.min(speed) <= 0:
        raise RefinementRequired("Curve has a stationary point, minimum speed: {}".format(np.min(speed)))
    speed_modes, speed_coefficients = _fourier(speed)
    mean_speed = speed_coefficients[0].real
    length = 2 * np.pi * mean_speed
    nonzero = speed_modes != 0

    def arclength(t):
        phases = np.exp(1j * np.outer(t, speed_modes[nonzero]))
        periodic = (phases - 1.0) @ (speed_coefficients[nonzero] / (1j * speed_modes[nonzero]))
        return mean_speed * t + periodic.real

    def speed_at(t):
        return np.abs(_evaluate(modes, coefficients, t, order=1))

    s_fine = arclength(t_fine)
    spline = CubicSpline(np.append(s_fine, length), np.append(t_fine, 2 * np.pi))
    targets = length * np.arange(n) / n
    t = spline(targets)
    for _ in range(constants.CURVES.NEWTON_MAXITER):
        step = (arclength(t) - targets) / speed_at(t)
        t = t - step
        if np.max(np.abs(step)) < 1e-14:
            break
    error = float(np.max(np.abs(arclength(t) - targets)))
    if error > constants.TOLERANCES.ARCLENGTH:
        raise RefinementRequired("Arc-length resampling did not converge, error: {}".format(error))
    log.debug("Arc-length resampling of length {} converged, error {}".format(length, error))

    z = _evaluate(modes, coefficients, t)
    dz = _evaluate(modes, coefficients, t, order=1)
    ddz = _evaluate(modes, coefficients, t, order=2)
    speed = np.abs(dz)
    gamma = np.stack([z.real, z.imag], axis=-1)
    tangent = np.stack([dz.real / speed, dz.imag / speed], axis=-1)
    curvature = (np.conj(dz) * ddz).imag / speed ** 3
    return PlaneCurve(n, float(length), gamma, tangent, curvature, True, 0.0)


def resample_arclength(samples, n):
    """
    Resamples a closed curve, given by samples at a uniform parameter, to uniform arc length.

    Args:
        :samples: (m, 2) array of points, periodic, first point not repeated
        :n: number of output samples

    Returns:
        a closed PlaneCurve with n samples

    Raises:
        :RefinementRequired: if the resampling does not reach the arc-length tolerance
    """
    samples = np.asarray(samples, dtype=float)
    if samples.ndim != 2 or samples.shape[1] != 2 or samples.shape[0] < constants.GRID.MIN_SAMPLES:
        raise ParameterError("Expected (m, 2) samples with m >= {}, got shape: {}".format(
            constants.GRID.MIN_SAMPLES, samples.shape))
    modes, coefficients = _fourier(samples[:, 0] + 1j * samples[:, 1])
    return _from_coefficients(modes, coefficients, n)


def ellipse(a, b, n=constants.CURVES.DEFAULT_SAMPLES):
    """
    Counterclockwise ellipse with semi-axes a, b sampled at uniform arc length.

    The Fourier series of a cos t + i b sin t is exact: c_1 = (a + b)/2 and c_-1 = (a - b)/2.
    """
    if not (a > 0 and b > 0):
        raise ParameterError("Ellipse semi-axes must be positive, got: ({}, {})".format(a, b))
    modes = np.array([1.0, -1.0])
    coefficients = np.array([(a + b) / 2.0, (a - b) / 2.0], dtype=complex)
    return _from_coefficients(modes, coefficients, n)


def _rhs(lam, x, y, phi):
    s = math.sin(phi)
    c = math.cos(phi)
    return c, s, lam + x * s - y * c


def _rk4_step(lam, state, h):
    x, y, phi = state
    k1 = _rhs(lam, x, y, phi)
    k2 = _rhs(lam, x + 0.5 * h * k1[0], y + 0.5 * h * k1[1], phi + 0.5 * h * k1[2])
    k3 = _rhs(lam, x + 0.5 * h * k2[0], y + 0.5 * h * k2[1], phi + 0.5 * h * k2[2])
    k4 = _rhs(lam, x + h * k3[0], y + h * k3[1], phi + h * k3[2])
    return (x + h / 6.0 * (k1[0] + 2 * k2[0] + 2 * k3[0] + k4[0]),
            y + h / 6.0 * (k1[1] + 2 * k2[1] + 2 * k3[1] + k4[1]),
            phi + h / 6.0 * (k1[2] + 2 * k2[2] + 2 * k3[2] + k4[2]))


def _integrate_states(lam, state, h, steps):
    states = np.empty((steps + 1, 3))
    states[0] = state
    for index in range(steps):
        state = _rk4_step(lam, state, h)
        states[index + 1] = state
    if not np.all(np.isfinite(states)):
        bad = int(np.argmax(~np.all(np.isfinite(states), axis=1)))
        raise RefinementRequired("Lambda-curve integration diverged at step {} (s = {})".format(bad, bad * h))
    return states


def _step_doubling(lam, start, h, steps, tolerance):
    """
    Integrates with step h and h / 2 and estimates the error of the coarse endpoint by Richardson extrapolation.

    Returns:
        the fine states at the coarse sample points

    Raises:
        :RefinementRequired: if the estimate exceeds tolerance
    """
    coarse = _integrate_states(lam, start, h, steps)
    fine = _integrate_states(lam, start, 0.5 * h, 2 * steps)[::2]
    error = float(np.max(np.abs(coarse[-1] - fine[-1]))) / 15.0
    log.debug("Lambda-curve step {}: endpoint error estimate {}".format(h, error))
    if tolerance is not None and error > tolerance:
        raise RefinementRequired("Step {} gives an endpoint error of {} > {}, reduce ds".format(h, error, tolerance))
    return fine


def _curve_from_states(lam, states, length, closed, gap):
    gamma = states[:, 0:2]
    tangent = np.stack([np.cos(states[:, 2]), np.sin(states[:, 2])], axis=-1)
    curvature = lam - np.sum(gamma * _rotate(tangent), axis=-1)
    return PlaneCurve(gamma.shape[0], float(length), gamma, tangent, curvature, closed, float(gap))


def integrate_lambda_curve(lam, gamma0, T0, s_max, ds=constants.CURVES.DEFAULT_DS,
                           tolerance=constants.TOLERANCES.STEP_ERROR):
    """
    Integrates a lambda-curve with a fixed-step fourth order Runge-Kutta scheme. The step is checked by step
    doubling: the run is repeated at half the step and the endpoint difference bounds the error.

    Example usage:

    >>> from xigeo import curves
    >>> c = curves.integrate_lambda_curve(0.0, (1.0, 0.0), (0.0, 1.0), 2 * np.pi)  # unit circle

    Args:
        :lam: the constant lambda
        :gamma0: starting point
        :T0: unit starting tangent
        :s_max: arc length to integrate
        :ds: target step, at most constants.CURVES.MAX_DS; the step used divides s_max exactly
        :tolerance: bound on the estimated endpoint error, None disables the check

    Returns:
        an open PlaneCurve holding every step, endpoints included

    Raises:
        :ParameterError: for a non-unit tangent or an out of range step
        :RefinementRequired: if the integration diverges or the error estimate exceeds tolerance
    """
    T0 = np.asarray(T0, dtype=float)
    gamma0 = np.asarray(gamma0, dtype=float)
    if abs(np.hypot(T0[0], T0[1]) - 1.0) > 1e-10:
        raise ParameterError("Initial tangent must be a unit vector, |T0| = {}".format(np.hypot(T0[0], T0[1])))
    if not 0 < ds <= constants.CURVES.MAX_DS:
        raise ParameterError("Step ds must lie in (0, {}], got: {}".format(constants.CURVES.MAX_DS, ds))
    if not s_max > 0:
        raise ParameterError("s_max must be positive, got: {}".format(s_max))
    steps = int(math.ceil(s_max / ds))
    h = s_max / steps
    start = (float(gamma0[0]), float(gamma0[1]), math.atan2(T0[1], T0[0]))
    states = _step_doubling(lam, start, h, steps, tolerance)
    gap = float(np.hypot(*(states[-1, 0:2] - states[0, 0:2])) +
                np.hypot(math.cos(states[-1, 2]) - T0[0], math.sin(states[-1, 2]) - T0[1]))
    return _curve_from_states(lam, states, s_max, False, gap)


def _parse_rotation(rotation):
    if isinstance(rotation, Fraction):
        value = rotation
    elif isinstance(rotation, str):
        parts = rotation.split("/")
        if len(parts) != 2:
            raise ParameterError("Rotation must be written p/q, got: {}".format(rotation))
        try:
            value = (int(parts[0]), int(parts[1]))
        except ValueError:
            raise ParameterError("Rotation must be written p/q with integers p and q, got: {}".format(rotation))
    else:
        value = tuple(rotation)
    if not isinstance(value, Fraction):
        p, q = value
        if q <= 0 or p <= 0:
            raise ParameterError("Rotation p/q needs positive p and q, got: {}/{}".format(p, q))
        if math.gcd(p, q) != 1:
            raise ParameterError("Rotation {}/{} is not in lowest terms".format(p, q))
        value = Fraction(p, q)
    return value


class _NoApex(Exception):
    pass


def _half_lobe(lam, r0, ds):
    """
    Integrates from (r0, 0) with T = (0, 1) to the next point where gamma is perpendicular to T.

    Returns:
        (arc length, swept polar angle)
    """
    state = (r0, 0.0, math.pi / 2)
    s = 0.0
    previous_angle = 0.0
    swept = 0.0
    sign = 0.0
    amplitude = 0.0
    limit = constants.CURVES.APEX_SEARCH_LENGTH
    while s < limit:
        new_state = _rk4_step(lam, state, ds)
        radial = new_state[0] * math.cos(new_state[2]) + new_state[1] * math.sin(new_state[2])
        if not math.isfinite(radial):
            raise RefinementRequired("Shooting diverged at r0 = {}, s = {}".format(r0, s))
        amplitude = max(amplitude, abs(radial))
        if sign == 0.0:
            sign = math.copysign(1.0, radial)
        elif radial * sign < 0:
            def radial_at(h, base=state):
                x, y, phi = _rk4_step(lam, base, h)
                return x * math.cos(phi) + y * math.sin(phi)
            h_apex = brentq(radial_at, 0.0, ds, xtol=constants.CURVES.ROOT_XTOL)
            x, y, _ = _rk4_step(lam, state, h_apex)
            angle = math.atan2(y, x)
            swept += math.remainder(angle - previous_angle, 2 * math.pi)
            if amplitude < constants.CURVES.MIN_AMPLITUDE:
                raise _NoApex()
            return s + h_apex, swept
        angle = math.atan2(new_state[1], new_state[0])
        swept += math.remainder(angle - previous_angle, 2 * math.pi)
        previous_angle = angle
        state = new_state
        s += ds
    raise _NoApex()


def _not_found(lam, rotation, reason):
    log.info("No closed lambda-curve for lambda={} rotation={}: {}".format(lam, rotation, reason))
    return LambdaShoot(lam, float("nan"), rotation, None, float("nan"), constants.REPORT.STATUS_NOT_FOUND)


def _closed_curve(lam, r0, length, n):
    substeps = max(1, int(math.ceil(length / (n * constants.CURVES.DEFAULT_DS))))
    h = length / (n * substeps)
    states = _step_doubling(lam, (r0, 0.0, math.pi / 2), h, n * substeps, constants.TOLERANCES.STEP_ERROR)
    end = states[-1]
    gap = float(math.hypot(end[0] - r0, end[1]) + math.hypot(math.cos(end[2]), math.sin(end[2]) - 1.0))
    curve = _curve_from_states(lam, states[:-1:substeps], length, gap <= constants.TOLERANCES.CLOSURE_ACCEPT, gap)
    return curve, gap


def shoot_closed(lam, rotation, r0_bracket, n=constants.CURVES.DEFAULT_SAMPLES, ds=constants.CURVES.DEFAULT_DS):
    """
    Searches a closed lambda-curve with the given rotation by shooting on the starting distance r0.

    Rotation 1/1 is the circle: the shooter solves the apex balance lambda + r0 - 1/r0 = 0. Any other p/q
    solves swept_angle(r0) = pi p / q where swept_angle is the polar angle between consecutive apexes; the
    closed curve then consists of 2q half-lobes.

    Args:
        :lam: the constant lambda
        :rotation: "p/q" string, (p, q) tuple or Fraction
        :r0_bracket: (low, high) interval for r0
        :n: samples of the closed curve
        :ds: integration step

    Returns:
        a LambdaShoot; status "not-found" (no exception) when the bracket holds no solution

    Raises:
        :ParameterError: for an invalid bracket or rotation
    """
    rotation = _parse_rotation(rotation)
    low, high = float(r0_bracket[0]), float(r0_bracket[1])
    if not 0 < low < high:
        raise ParameterError("Bracket must satisfy 0 < low < high, got: ({}, {})".format(low, high))

    if rotation == 1:
        def balance(r0):
            return lam + r0 - 1.0 / r0
        if balance(low) * balance(high) > 0:
            return _not_found(lam, rotation, "no sign change of the circle balance in [{}, {}]".format(low, high))
        r0 = brentq(balance, low, high, xtol=constants.CURVES.ROOT_XTOL, maxiter=constants.CURVES.ROOT_MAXITER)
        length = 2 * math.pi * r0
        swept = math.pi
    else:
        target = math.pi * rotation.numerator / rotation.denominator

        def mismatch(r0):
            return _half_lobe(lam, r0, ds)[1] - target
        try:
            f_low, f_high = mismatch(low), mismatch(high)
        except _NoApex:
            return _not_found(lam, rotation, "bracket endpoint without apex")
        if f_low * f_high > 0:
            return _not_found(lam, rotation, "no sign change in [{}, {}]: ({}, {})".format(low, high, f_low, f_high))
        try:
            r0 = brentq(mismatch, low, high, xtol=constants.CURVES.ROOT_XTOL, maxiter=constants.CURVES.ROOT_MAXITER)
            half_length, swept = _half_lobe(lam, r0, ds)
        except _NoApex:
            return _not_found(lam, rotation, "apex lost inside the bracket")
        length = 2 * rotation.denominator * half_length
    curve, gap = _closed_curve(lam, r0, length, n)
    log.info("Shot lambda={} rotation={}: r0={} length={} closure gap={}".format(lam, rotation, r0, length, gap))
    return LambdaShoot(lam, r0, rotation, curve, gap, constants.REPORT.STATUS_FOUND, swept)


def lambda_residual(c, lam):
    """
    Spectrally measured max |k + <gamma, J T> - lambda| of a closed curve.

    Returns:
        (residual, closure gap)
    """
    if not c.closed:
        raise ClosureError("Lambda residual needs a closed curve, gap: {}".format(c.closure_gap), gap=c.closure_gap)
    dgamma = grid.periodic_derivative(c.gamma, c.length, axis=0)
    ddgamma = grid.periodic_derivative(c.gamma, c.length, axis=0, order=2)
    speed = np.hypot(dgamma[:, 0], dgamma[:, 1])
    tangent = dgamma / speed[:, None]
    curvature = (dgamma[:, 0] * ddgamma[:, 1] - dgamma[:, 1] * ddgamma[:, 0]) / speed ** 3
    residual = curvature + np.sum(c.gamma * _rotate(tangent), axis=-1) - lam
    return float(np.max(np.abs(residual))), float(c.closure_gap)


def product_xi_field(c1, lambda1, c2, lambda2):
    """
    The parallel normal field lambda_1 J gamma_1' + lambda_2 J gamma_2' of a product of lambda-curves
    """
    xi = np.empty((c1.n, c2.n, 4))
    xi[..., 0:2] = (lambda1 * _rotate(c1.tangent))[:, None, :]
    xi[..., 2:4] = (lambda2 * _rotate(c2.tangent))[None, :, :]
    return xi


def product_xi(c1, lambda1, c2, lambda2):
    """
    Builds the product surface of two closed lambda-curves with its analytic xi attached.

    Args:
        :c1: first closed lambda-curve
        :lambda1: its lambda
        :c2: second closed lambda-curve
        :lambda2: its lambda

    Returns:
        a CertifiedSurface

    Raises:
        :CertificationError: if a factor is open or fails its lambda equation
    """
    for label, c, lam in (("c1", c1, lambda1), ("c2", c2, lambda2)):
        if not c.closed or c.closure_gap > constants.TOLERANCES.CLOSURE_ACCEPT:
            raise CertificationError("Factor {} is not closed, gap: {}".format(label, c.closure_gap))
        residual, _ = lambda_residual(c, lam)
        if residual > constants.TOLERANCES.CERTIFICATION:
            raise CertificationError("Factor {} is not a lambda-curve for lambda={}, residual: {}".format(
                label, lam, residual))
    provenance = {"family": constants.FAMILIES.PRODUCT_XI, "lambda_1": float(lambda1), "lambda_2": float(lambda2),
                  "length_1": float(c1.length), "length_2": float(c2.length)}
    surface = surfaces.make_product_curves(c1, c2, provenance)
    return CertifiedSurface(surface, product_xi_field(c1, lambda1, c2, lambda2), (float(lambda1), float(lambda2)),
                            (c1, c2))


def certify(certified, estimate, tolerance=constants.TOLERANCES.CERTIFICATION):
    """
    Compares an xi estimate with the analytic xi of a certified product.

    Args:
        :certified: CertifiedSurface from product_xi
        :estimate: XiEstimate computed on certified.surface
        :tolerance: bound on both max |xi_hat - xi| and the parallel residual

    Returns:
        max |xi_hat - xi|

    Raises:
        :CertificationError: on mismatch
    """
    mismatch = float(np.max(np.linalg.norm(estimate.xi_hat - certified.xi, axis=-1)))
    if mismatch > tolerance:
        raise CertificationError("Estimated xi differs from the certified field by {} > {}".format(mismatch, tolerance))
    if estimate.parallel_residual > tolerance:
        raise CertificationError("Certified surface is not parallel: residual {} > {}".format(
            estimate.parallel_residual, tolerance))
    return mismatch
