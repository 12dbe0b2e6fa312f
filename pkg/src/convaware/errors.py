"""Exception hierarchy shared by every convaware module.

Callers that want blanket handling can catch ConvawareError; the
subclasses separate bad inputs from numerical breakdown, bad
configuration, and malformed files.
"""


class ConvawareError(Exception):
    """Base class for all errors raised by this package."""


class DomainError(ConvawareError):
    """An argument violates an operation's precondition (shape, rank, range)."""


class NumericError(ConvawareError):
    """A computation failed numerically (non-convergence, degenerate variance)."""


class ConfigError(ConvawareError):
    """A request names an unknown scheme, policy, or option combination."""


class FormatError(ConvawareError):
    """A tensor file is malformed. Carries the byte offset of the defect."""

    def __init__(self, message: str, offset: int):
        super().__init__(f"{message} (byte offset {offset})")
        self.offset = offset
