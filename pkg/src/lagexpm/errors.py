"""Exception hierarchy shared by the whole package.

Exit-code mapping used by the CLI lives in cli.py; library code only
raises these types and never calls sys.exit.
"""


class LagexpmError(Exception):
    """Base class for all errors raised by this package."""


class ParameterError(LagexpmError, ValueError):
    """Invalid parameter value (bad tau, n_trunc above the cap, bad config)."""


class ShapeError(ParameterError):
    """Matrix shape violation (non-square, dimension mismatch)."""


class DomainError(LagexpmError, ValueError):
    """Argument outside the mathematical domain of an operation."""


class StabilityError(LagexpmError):
    """An eigenvalue with non-negative real part where stability is required."""

    def __init__(self, message, abscissa=None, index=None):
        super().__init__(message)
        self.abscissa = abscissa
        self.index = index


class NumericalError(LagexpmError):
    """An underlying numerical routine failed to converge."""


class ConvergenceError(LagexpmError):
    """Iteration budget exceeded; carries the best iterate found so far."""

    def __init__(self, message, best=None):
        super().__init__(message)
        self.best = best


class BracketError(ConvergenceError):
    """No sign change found while expanding the search bracket."""


class AccuracyError(LagexpmError):
    """A result could not be computed to the promised accuracy.

    partial holds the best available value when one exists.
    """

    def __init__(self, message, partial=None):
        super().__init__(message)
        self.partial = partial


class AccuracyWarning(UserWarning):
    """Result returned, but an internal accuracy target was missed."""
