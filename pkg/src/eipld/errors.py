"""Exception hierarchy shared by every module of the package."""


class EIPLDError(Exception):
    """Base class for all errors raised by this package."""


class DomainError(EIPLDError, ValueError):
    """An argument lies outside the domain of the operation."""


class MomentDoesNotExistError(DomainError):
    """The requested moment is infinite (requires ``alpha > r``)."""


class NumericalError(EIPLDError, ArithmeticError):
    """A quantity under- or overflowed and cannot be reported faithfully."""


class ConvergenceError(EIPLDError, RuntimeError):
    """An iterative procedure stopped before meeting its tolerance.

    The best available estimate and its error bound travel with the error.
    """

    def __init__(self, message, estimate=None, error=None):
        super().__init__(message)
        self.estimate = estimate
        self.error = error


class DataError(EIPLDError, ValueError):
    """Input data could not be parsed or violates the support."""


class SimulationError(EIPLDError, RuntimeError):
    """Too many fits failed inside a Monte Carlo study."""
