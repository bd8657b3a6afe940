"""Exception types shared across the package."""


class PreconditionError(ValueError):
    """An operation was called on input outside its domain."""


class InsufficientDepth(LookupError):
    """A finite tree ran out of levels before the searched level appeared.

    Desk-scale trees are truncations, so this is a reportable outcome
    rather than a bug.
    """


class ParseError(ValueError):
    """Malformed text input."""

    def __init__(self, message, line=None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line
