"""Exception hierarchy.  Each class maps to one CLI exit code."""


class CakeError(Exception):
    """Base class for every error raised on purpose by this package."""

    exit_code = 1


class ValidationError(CakeError, ValueError):
    """Malformed input: bad interval, non-monotone cdf, parse failure."""

    exit_code = 3


class DomainError(ValidationError):
    """A point or parameter lies outside its admissible range."""


class RefinementError(ValidationError):
    """A grid is too coarse for the valuation it should model."""


class CapacityError(CakeError):
    """An enumeration bound would be exceeded."""

    exit_code = 4


class PreconditionError(CakeError):
    """An operation was called on an input violating its hypothesis.

    ``witness`` carries the offending object (a jump, a breakpoint, ...).
    """

    exit_code = 5

    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness
