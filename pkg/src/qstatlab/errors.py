"""Exception types shared across the package."""


class ValidationError(ValueError):
    """Input violates a declared precondition or type invariant."""


class DomainError(ValidationError):
    """A scalar function was requested outside its domain (e.g. log of a
    negative retained eigenvalue)."""


class CapacityError(RuntimeError):
    """An exact-enumeration guard was exceeded (too many type classes or
    sequences to enumerate)."""


class NumericalError(RuntimeError):
    """An internal numerical contract failed (e.g. an overlap trace far
    outside [0, 1], or a nonpositive value handed to a logarithm)."""


class DegeneratePosteriorError(NumericalError):
    """Every posterior weight vanished: the data lie outside the support of
    every grid point."""
