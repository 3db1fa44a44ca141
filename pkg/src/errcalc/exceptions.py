"""Exception and warning types shared across the package."""


class ErrcalcError(Exception):
    """Base class for all errors raised by this package."""


class ParseError(ErrcalcError):
    """Malformed expression source.  Carries 1-based line/column."""

    def __init__(self, message, line=None, column=None):
        self.line = line
        self.column = column
        if line is not None:
            message = f"{message} (line {line}, column {column})"
        super().__init__(message)


class DomainError(ErrcalcError):
    """Evaluation or differentiation outside a node's domain."""


class ValidationError(ErrcalcError):
    """Invalid input data: dimensions, non-PSD matrices, bad configuration."""


class NumericalError(ErrcalcError):
    """Runtime numerical failure: non-finite samples, route disagreement,
    extrapolation residual inconsistent with the assumed asymptotic order."""


class NonDifferentiableWarning(UserWarning):
    """Emitted when a jet is requested at a kink (abs at 0)."""


class DegenerateJacobianWarning(UserWarning):
    """Emitted when a transported precision matrix is rank-deficient."""
