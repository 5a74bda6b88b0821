"""Exception types shared across the library."""


class JelliumError(Exception):
    """Base class for all library errors."""


class DomainError(JelliumError, ValueError):
    """Argument outside the mathematical domain of the function."""


class PoleError(DomainError):
    """Evaluation requested exactly at a pole."""


class RangeError(DomainError):
    """Parameter outside the supported range of an operation."""


class SingularityError(JelliumError, ValueError):
    """Evaluation requested at a singular point (coincident charges, lattice point)."""


class NormalizationError(JelliumError, ValueError):
    """Input violates a required normalization (e.g. non-unit covolume)."""


class AccuracyError(JelliumError, RuntimeError):
    """Requested tolerance could not be met.

    Carries the best available estimate in ``achieved``.
    """

    def __init__(self, message, achieved=None):
        super().__init__(message)
        self.achieved = achieved


class ConvergenceError(JelliumError, RuntimeError):
    """Iteration failed to converge; ``last_iterate`` holds the final state."""

    def __init__(self, message, last_iterate=None):
        super().__init__(message)
        self.last_iterate = last_iterate
