"""Exception hierarchy shared by every module."""


class DomainError(ValueError):
    """An argument lies outside the domain of the requested quantity."""


class NumericalError(ArithmeticError):
    """An iterative scheme failed to reach its tolerance.

    ``partial`` holds the last iterate and ``achieved`` the error estimate at
    the point the budget ran out, so callers can decide whether it is usable.
    """

    def __init__(self, message, partial=None, achieved=None):
        super().__init__(message)
        self.partial = partial
        self.achieved = achieved


class QuadratureError(NumericalError):
    """Adaptive quadrature exhausted its subdivision budget."""


class SearchError(RuntimeError):
    """A root or maximum search could not bracket its target."""
