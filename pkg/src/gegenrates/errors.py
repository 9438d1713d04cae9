"""Exception hierarchy shared by all modules."""


class GegenratesError(Exception):
    """Base class for errors raised by this package."""


class DomainError(GegenratesError, ValueError):
    """Argument outside the domain of a function (poles, negative arguments, ...)."""


class ConvergenceError(GegenratesError, ArithmeticError):
    """An iterative method failed to reach its tolerance."""


class DegreeUnderflowError(GegenratesError, ValueError):
    """Differentiation order exceeds the degree of a series."""


class QuadratureAccuracyError(ConvergenceError):
    """Successive quadrature refinements kept disagreeing.

    The last two coefficient sets are kept on the exception so callers can
    inspect how far apart they were.
    """

    def __init__(self, message, previous=None, latest=None):
        super().__init__(message)
        self.previous = previous
        self.latest = latest


class RemezError(ConvergenceError):
    """The exchange algorithm did not converge or its reference collapsed."""

    def __init__(self, message, result=None):
        super().__init__(message)
        self.result = result
