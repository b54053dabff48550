"""
Exception hierarchy for fqwalk.

Everything the library raises on bad input is a ``ValueError`` subclass so
callers can catch it the usual way; internal invariant breaches are
``RuntimeError`` subclasses and signal a bug rather than bad input.
"""


class FacialWalkError(Exception):
    """Base class for all fqwalk errors."""


class GraphFormatError(FacialWalkError, ValueError):
    """Malformed graph text."""

    def __init__(self, message: str, line: int = 0):
        self.line = line
        if line:
            message = f"line {line}: {message}"
        super().__init__(message)


class GraphValidationError(FacialWalkError, ValueError):
    """A rotation tailed graph violates one of its invariants."""


class CoinError(FacialWalkError, ValueError):
    """The coin is not admissible."""


class PreconditionError(FacialWalkError, ValueError):
    """An operation was called outside its domain."""


class InvariantError(FacialWalkError, RuntimeError):
    """Something that cannot happen on valid input happened."""


__all__ = [
    "FacialWalkError",
    "GraphFormatError",
    "GraphValidationError",
    "CoinError",
    "PreconditionError",
    "InvariantError",
]
