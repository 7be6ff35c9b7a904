"""Exception hierarchy shared by every module."""


class HypermatchError(Exception):
    """Base class for all package errors."""


class ValidationError(HypermatchError, ValueError):
    """Input violates a documented precondition."""


class InvalidQueryError(ValidationError):
    """A degree or threshold query with out-of-range parameters."""


class FormatError(ValidationError):
    """Malformed JSON payload."""


class ResourceLimitError(HypermatchError, RuntimeError):
    """Exact computation would exceed a configured cap."""

    def __init__(self, message, required=None, cap=None):
        super().__init__(message)
        self.required = required
        self.cap = cap


class SolverError(HypermatchError, RuntimeError):
    """Exact LP failed; never expected on valid input."""


class BoundViolationError(HypermatchError, AssertionError):
    """A computed probability exceeds a proved upper bound.

    This can only mean an implementation bug, so callers should surface it loudly.
    """
