"""Exception hierarchy shared by every qconverse module."""


class QConverseError(Exception):
    """Base class for all library errors."""


class ValidationError(QConverseError, ValueError):
    """An input object violates one of its invariants."""


class DimensionError(ValidationError):
    """Operand shapes are incompatible."""


class SizeLimitError(QConverseError):
    """A result would exceed the configured dense-size cap."""


class PositivityError(ValidationError):
    """A matrix expected to be positive semidefinite has a negative eigenvalue."""


class InvalidChannelError(ValidationError):
    """Kraus operators fail the trace-preservation check."""

    def __init__(self, message, residual=None):
        super().__init__(message)
        self.residual = residual


class DomainError(QConverseError, ValueError):
    """A scalar argument lies outside the domain of the function."""


class NumericError(QConverseError, ArithmeticError):
    """A numerical routine failed to converge."""


class ConsistencyError(QConverseError, AssertionError):
    """Two independent evaluations of the same quantity disagree.

    This always signals a bug in the library, never bad user input.
    """


class ProblemFileError(QConverseError):
    """A problem file could not be parsed, resolved or validated."""

    def __init__(self, message, line=None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line
