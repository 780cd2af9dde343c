"""Exception types raised across the package."""


class PrimeZerosError(Exception):
    """Base class for every error raised by this package."""


class DomainError(PrimeZerosError, ValueError):
    """An argument lies outside a function's domain (pole, non-positive, ...)."""


class QuadratureError(PrimeZerosError, ArithmeticError):
    def __init__(self, message, achieved=None):
        super().__init__(message)
        self.achieved = achieved


class TruncationInfeasible(PrimeZerosError):
    """The prime sum would need more terms than the configured ceiling."""

    def __init__(self, message, tau=None, eps_floor=None, xi=None):
        super().__init__(message)
        self.tau = tau
        self.eps_floor = eps_floor
        self.xi = xi


class UnsupportedRegime(PrimeZerosError, ValueError):
    """The exact Hermite weight was requested for a k beyond its supported range."""


class CoverageError(PrimeZerosError, ValueError):
    """A zero table does not reach far enough around the requested centre."""

    def __init__(self, message, needed=None):
        super().__init__(message)
        self.needed = needed


class ResolutionError(PrimeZerosError, ValueError):
    """A scan grid is too coarse to resolve the Gaussian bumps it should show."""


class IncompleteTableWarning(UserWarning):
    """Zero search found fewer sign changes than the counting function predicts."""
