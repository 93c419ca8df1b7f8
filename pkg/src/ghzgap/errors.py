"""Exception types shared across the package."""


class GhzGapError(Exception):
    """Base class for all errors raised by this package."""


class ConfigParseError(GhzGapError, ValueError):
    """A configuration string contains an invalid letter.

    `position` is the 1-based station index of the offending character.
    """

    def __init__(self, message: str, position: int):
        super().__init__(message)
        self.position = position


class CapacityError(GhzGapError, ValueError):
    """An input exceeds an enumerative or representational size limit."""


class DomainError(GhzGapError, ValueError):
    """A parameter lies outside the mathematical domain of an operation."""
