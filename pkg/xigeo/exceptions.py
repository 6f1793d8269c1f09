"""
Common Exceptions thrown by the xigeo library
"""


class XigeoError(Exception):
    """Base class of every error raised by xigeo"""


class GridError(XigeoError):
    """This exception will be raised if a grid specification is invalid or a field holds non-finite values"""


class ParameterError(XigeoError):
    """This exception will be raised if a constructor or operation receives an out-of-range parameter"""


class DegenerateMetricError(XigeoError):
    """This exception will be raised if the induced metric (or an area element) is not positive definite"""

    def __init__(self, message, min_value=None, location=None):
        super(DegenerateMetricError, self).__init__(message)
        self.min_value = min_value
        self.location = location


class ClosureError(XigeoError):
    """This exception will be raised if a curve that must be closed has an endpoint gap"""

    def __init__(self, message, gap=None):
        super(ClosureError, self).__init__(message)
        self.gap = gap


class NotLagrangianError(XigeoError):
    """This exception will be raised if a Lagrangian-only computation is requested on a non-Lagrangian surface"""


class HypothesisError(XigeoError):
    """This exception will be raised if the hypothesis of an operation (e.g. flatness) is violated"""


class ApplicabilityError(XigeoError):
    """This exception will be raised if an identity is requested on a surface it does not apply to"""


class CertificationError(XigeoError):
    """This exception will be raised if an analytic xi certification does not match the estimated field"""


class RefinementRequired(XigeoError):
    """This exception will be raised if an ODE integration drifts and a smaller step is needed"""


class SurfaceFileError(XigeoError):
    """This exception will be raised if a surface file is malformed"""
