"""Exception and warning types raised across the package."""


class CicError(Exception):
    """Base class for all package errors."""


class InvalidDimensionError(CicError, ValueError):
    pass


class ShapeError(CicError, ValueError):
    pass


class NonHermitianError(CicError, ValueError):
    pass


class InvalidStateError(CicError, ValueError):
    pass


class ZeroProbabilityError(CicError, ValueError):
    """The requested measurement outcome has (numerically) zero probability."""


class GridError(CicError, ValueError):
    pass


class IntegrationError(CicError, RuntimeError):
    """A quadrature failed to reach its tolerance.

    ``estimate`` and ``residual`` carry the best value and error estimate
    reached before giving up.
    """

    def __init__(self, message, estimate=None, residual=None):
        super().__init__(message)
        self.estimate = estimate
        self.residual = residual


class OptimizerError(CicError, RuntimeError):
    pass


class NotAStateWarning(UserWarning):
    """A reconstructed operator is not positive semidefinite."""
