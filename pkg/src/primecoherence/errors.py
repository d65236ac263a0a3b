"""Exception types shared across the package."""


class PrimeCoherenceError(Exception):
    """Base class for all errors raised by this package."""


class InvalidArgument(PrimeCoherenceError, ValueError):
    """An argument violates an operation's precondition."""


class InsufficientData(PrimeCoherenceError, ValueError):
    """Too few usable samples to carry out a fit or statistic."""


class NumericalFailure(PrimeCoherenceError, ArithmeticError):
    """A numerical routine did not converge or produced an invalid result.

    ``provenance`` carries whatever construction metadata was available
    for the offending matrix.
    """

    def __init__(self, message, provenance=None):
        super().__init__(message)
        self.provenance = dict(provenance or {})
