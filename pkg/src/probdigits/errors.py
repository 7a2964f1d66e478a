"""Exception types shared across the package."""


class ProbdigitsError(Exception):
    """Base class for all probdigits errors."""


class ValidationError(ProbdigitsError, ValueError):
    """A distribution or target failed a structural check.

    Carries the name of the violated check and, when meaningful, the first
    offending index.
    """

    def __init__(self, message, check=None, index=None):
        super().__init__(message)
        self.check = check
        self.index = index


class TailExhaustionError(ProbdigitsError):
    """A point could not be resolved within the scan cap of the tail.

    Raised by digit location when the prefix sums cannot be extended past
    ``n_max`` to cover the queried point. ``partial_word`` holds any digits
    produced before exhaustion (set by the encoder, else None).
    """

    def __init__(self, message, n_max=None, x=None, partial_word=None):
        super().__init__(message)
        self.n_max = n_max
        self.x = x
        self.partial_word = partial_word


class PrecisionExhaustionError(ProbdigitsError):
    """A quantity underflowed binary64 and cannot be represented."""


class DivergentSeriesError(ProbdigitsError):
    """A requested series provably diverges; no value is fabricated."""


class ConvergenceError(ProbdigitsError):
    """An iteration failed to reach its tolerance within its budget."""
