"""Exception types with stable machine-readable codes."""


class StatikitError(Exception):
    """Base class for all domain errors raised by this package."""

    code = "ERROR"

    def __init__(self, message=""):
        super().__init__(message or self.code)


class NotPointedError(StatikitError):
    code = "NOT_POINTED"


class RayOutsideSupportError(StatikitError):
    code = "RAY_OUTSIDE_SUPPORT"


class SupportMismatchError(StatikitError):
    code = "SUPPORT_MISMATCH"


class ZeroVectorError(StatikitError):
    code = "ZERO_VECTOR"


class UnsupportedSupportError(StatikitError):
    code = "UNSUPPORTED_SUPPORT"


class NonSmoothChartError(StatikitError):
    code = "NON_SMOOTH_CHART"


class InvalidInputError(StatikitError):
    code = "INVALID_INPUT"
