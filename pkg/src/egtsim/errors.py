"""Exception types shared across the package."""


class ValidationError(ValueError):
    """An input violates a documented precondition (bad vector, bad file, bad shape)."""


class NumericalAbort(RuntimeError):
    """An integration produced non-finite values or drifted past its invariant tolerance."""
