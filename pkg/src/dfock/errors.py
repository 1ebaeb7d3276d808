"""Exception types shared across the library.

The CLI maps these onto exit codes: UsageError -> 2, the numerical
errors (DomainError, RangeError, TruncationError, NormalizationError) -> 3.
"""


class DfockError(Exception):
    """Base class for all library errors."""


class DomainError(DfockError, ValueError):
    """Argument outside the mathematical domain of an operation."""


class UsageError(DfockError, ValueError):
    """API misuse (unknown label, mismatched cutoffs, bad spec)."""


class RangeError(DfockError, ArithmeticError):
    """A result overflowed or became non-finite for the given parameters."""

    def __init__(self, message, n=None, lambda1=None, lambda2=None):
        super().__init__(message)
        self.n = n
        self.lambda1 = lambda1
        self.lambda2 = lambda2


class TruncationError(DfockError, RuntimeError):
    """The requested computation does not fit under the Fock cutoff."""

    def __init__(self, message, report=None):
        super().__init__(message)
        self.report = report


class NormalizationError(DfockError, ArithmeticError):
    """A normalization constant came out zero, negative or non-finite."""
