"""Exception types shared across the package."""


class MVError(Exception):
    """Base class for all package errors."""


class DomainError(MVError, ValueError):
    """Input outside the mathematical domain of an operation."""


class DegenerateInputError(DomainError):
    """Input set is not in general position (ties, missing anchors, ...)."""


class MalformedComplexError(MVError):
    """A complex violates a structural invariant (vertex degree, cycles)."""


class InvariantError(MVError, RuntimeError):
    """An internal invariant failed; results would be unreliable."""
