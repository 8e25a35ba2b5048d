"""Exception hierarchy shared by every module of the package."""


class HessianKKError(Exception):
    """Base class for all package errors."""


class DomainError(HessianKKError, ValueError):
    """An argument lies outside the mathematical domain of an operation."""


class ConfigError(HessianKKError, ValueError):
    """A problem configuration (file, override or expression) is malformed."""


class NumericError(HessianKKError, ArithmeticError):
    """A computation produced a non-finite value or failed to reach tolerance."""


class OverflowCapError(NumericError):
    """``exp(G)`` overflows before the requested point of the working interval.

    Attributes
    ----------
    t : float
        The abscissa at which the overflow was detected.
    """

    def __init__(self, message, t=None):
        super().__init__(message)
        self.t = t


class OutOfRangeError(NumericError):
    """A value lies below the numerically reachable range of a transform."""


class AdmissibilityError(NumericError):
    """A radial integrand became negative, so no k-admissible profile exists."""


class ConvergenceError(NumericError):
    """An iterative method stopped before converging.

    Attributes
    ----------
    history : list
        Iteration trace (residuals, brackets or last iterate), newest last.
    """

    def __init__(self, message, history=None):
        super().__init__(message)
        self.history = list(history) if history is not None else []
