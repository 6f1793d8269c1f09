"""

Miscellaneous utility functions: configuration from the environment, logging setup and residual norms.

"""

import logging
import os
from dataclasses import dataclass, replace

import numpy as np

from xigeo import constants
from xigeo.exceptions import ParameterError


@dataclass(frozen=True)
class Tolerances:
    """
    Tolerances used by a pipeline run. Every field is a normalized (scale-free) bound.
    """
    lagrangian: float = constants.TOLERANCES.LAGRANGIAN
    xi: float = constants.TOLERANCES.XI
    identity: float = constants.TOLERANCES.IDENTITY

    def as_dict(self):
        return {"lagrangian": self.lagrangian, "xi": self.xi, "identity": self.identity}


def _read_float_env(name, default):
    """
    Reads a positive float from the environment

    Args:
        :name: environment variable name
        :default: value returned when the variable is unset

    Returns:
        the parsed value

    Raises:
        :ParameterError: if the variable is set but not a positive number
    """
    raw = os.environ.get(name)
    if raw is None or raw == "":
        return default
    try:
        value = float(raw)
    except ValueError:
        raise ParameterError("Environment variable {} must be a number, got: {}".format(name, raw))
    if not np.isfinite(value) or value <= 0:
        raise ParameterError("Environment variable {} must be a positive finite number, got: {}".format(name, raw))
    return value


def get_tolerances(lagrangian=None, xi=None, identity=None):
    """
    Resolves the tolerances of a run: explicit arguments win over environment variables, which win over the
    defaults in constants.TOLERANCES.

    Example usage:

    >>> from xigeo import util
    >>> util.get_tolerances(xi=1e-5).xi
    1e-05

    Args:
        :lagrangian: override for the Lagrangian residual tolerance
        :xi: override for the xi classification tolerance
        :identity: override for the identity residual tolerance

    Returns:
        a Tolerances record
    """
    tolerances = Tolerances(
        lagrangian=_read_float_env(constants.ENV_VARIABLES.TOL_LAGRANGIAN_ENV_VAR, constants.TOLERANCES.LAGRANGIAN),
        xi=_read_float_env(constants.ENV_VARIABLES.TOL_XI_ENV_VAR, constants.TOLERANCES.XI),
        identity=_read_float_env(constants.ENV_VARIABLES.TOL_IDENTITY_ENV_VAR, constants.TOLERANCES.IDENTITY))
    overrides = {}
    for key, value in (("lagrangian", lagrangian), ("xi", xi), ("identity", identity)):
        if value is not None:
            if value <= 0:
                raise ParameterError("Tolerance {} must be positive, got: {}".format(key, value))
            overrides[key] = float(value)
    return replace(tolerances, **overrides)


def get_log_level(level=None):
    """
    Returns:
        the log level name to use, from the argument, the environment or the default
    """
    if level:
        return level.upper()
    return os.environ.get(constants.ENV_VARIABLES.LOG_LEVEL_ENV_VAR, constants.LOGGING.DEFAULT_LEVEL).upper()


def setup_logging(level=None):
    """
    Configures the root logger for command-line use. Logs go to stderr.

    Args:
        :level: log level name, e.g. "INFO"; defaults to XIGEO_LOG_LEVEL or WARNING
    """
    level_name = get_log_level(level)
    numeric = getattr(logging, level_name, None)
    if not isinstance(numeric, int):
        raise ParameterError("Unknown log level: {}".format(level_name))
    logging.basicConfig(level=numeric, format=constants.LOGGING.FORMAT, datefmt=constants.LOGGING.DATE_FORMAT)


def sup_norm(values):
    """
    Max absolute value of an array, 0 for empty input
    """
    values = np.asarray(values)
    if values.size == 0:
        return 0.0
    return float(np.max(np.abs(values)))


def normalized_residual(lhs, rhs):
    """
    Sup-norm of lhs - rhs divided by 1 + the larger sup-norm of the two sides

    Args:
        :lhs: array of left-hand side values
        :rhs: array of right-hand side values (broadcastable to lhs)

    Returns:
        the normalized residual as a float
    """
    lhs = np.asarray(lhs, dtype=float)
    rhs = np.asarray(rhs, dtype=float)
    return sup_norm(lhs - rhs) / (1.0 + max(sup_norm(lhs), sup_norm(rhs)))
