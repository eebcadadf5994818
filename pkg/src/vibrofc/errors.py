"""Shared exception and warning types."""


class VibrofcError(Exception):
    """Base class for all errors raised by this package."""


class DomainError(VibrofcError, ValueError):
    """Argument outside the mathematical domain of an operation."""


class DimensionError(DomainError):
    """Mismatched or unsupported dimensions."""


class DegenerateConfigurationError(VibrofcError):
    """Singular or near-singular matrix where an invertible one is required."""


class SingularParameterError(VibrofcError):
    """Tomogram query too close to a singular slice (e.g. nu ~ 0 on the general path)."""


class AccuracyError(VibrofcError):
    """Numerical routine failed to converge to the requested accuracy.

    Carries the best available estimate and the diagnostic sequence that
    triggered the failure.
    """

    def __init__(self, message, estimate=None, diagnostics=None):
        super().__init__(message)
        self.estimate = estimate
        self.diagnostics = diagnostics


class MethodMismatchError(VibrofcError):
    """Requested spectrum method is not applicable to the given input."""


class SpecError(VibrofcError):
    """Malformed molecule spec file."""


class TruncationWarning(UserWarning):
    """A line or grid integral lost non-negligible mass outside its support."""


class NormalizationWarning(UserWarning):
    """An input state appears not to be unit normalized."""
