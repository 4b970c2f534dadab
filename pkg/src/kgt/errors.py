"""Exception types shared across modules."""


class InvalidInput(ValueError):
    """An argument violates an operation's precondition."""


class VerificationFailure(RuntimeError):
    """A computed object failed an internal consistency check."""
