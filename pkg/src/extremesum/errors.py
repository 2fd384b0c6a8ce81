"""Exception types shared across the package."""


class ExtremeSumError(Exception):
    """Base class for errors raised by this package."""


class UnsupportedModelError(ExtremeSumError):
    """An operation was requested that the model does not support,
    for example the slowly varying tail rate of a model outside the
    representation class."""


class QuadratureError(ExtremeSumError):
    """Adaptive quadrature failed to reach the requested accuracy.

    Carries the best estimate and the reported error bound so callers
    can flag the entry instead of losing the partial result.
    """

    def __init__(self, message, estimate=float("nan"), error_bound=float("inf")):
        super().__init__(message)
        self.estimate = estimate
        self.error_bound = error_bound


class ConfigError(ExtremeSumError, ValueError):
    """Invalid experiment configuration (bad field, bad file, bad override)."""


class NumericError(ExtremeSumError):
    """A runtime numeric failure: too many non-finite replicate statistics,
    or an evaluation that produced values no downstream summary can use."""
