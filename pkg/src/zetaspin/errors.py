"""Exception types shared across the package."""


class ZetaspinError(Exception):
    """Base class for computational failures (CLI exit code 1)."""


class InvalidModulusError(ValueError):
    pass


class PoleError(ZetaspinError, ArithmeticError):
    """A denominator vanished (or came within the guard threshold of zero)."""


class DomainError(ZetaspinError, ValueError):
    pass


class ConvergenceError(ZetaspinError):
    """Iteration failed to converge.

    ``last`` holds the final iterate and ``residual`` its function value magnitude.
    """

    def __init__(self, message, last=None, residual=None):
        super().__init__(message)
        self.last = last
        self.residual = residual


class PrecisionError(ZetaspinError):
    """A p-adic predicate cannot be decided at the available precision."""


class BasisTooLargeError(ZetaspinError):
    pass


class TruncationWarning(UserWarning):
    """Evaluation outside the half-plane where a truncated product is known to converge."""
