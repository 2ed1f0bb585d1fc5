"""Exception types shared by every service module.

All of them derive from ``ValueError`` so callers that only care about
"bad input" can keep catching that.
"""


class SuturedError(ValueError):
    """Base class for every error raised by this package."""


class StructuralError(SuturedError):
    """Arguments that do not fit together (rank, ring or dimension mismatch)."""


class MalformedInputError(SuturedError):
    """Text or JSON input that cannot be parsed."""


class ConsistencyError(SuturedError):
    """An internal invariant failed; signals a malformed complex or a bug."""


class ValidationError(StructuralError):
    """Raised when an object that must be valid is not.

    Args:
        message (str): summary of the failure.
        violations (list): the ``Violation`` records that were found.
    """

    def __init__(self, message, violations=()):
        super().__init__(message)
        self.violations = list(violations)

    def __str__(self):
        base = super().__str__()
        if not self.violations:
            return base
        details = "; ".join(str(v) for v in self.violations[:5])
        return f"{base}: {details}"
