"""Exception types raised across the package."""


class SoqcError(Exception):
    """Base class for all errors raised by soqc."""


class InvalidParameter(SoqcError, ValueError):
    pass


class ResourceLimit(SoqcError):
    """A configured enumeration bound would be exceeded."""

    def __init__(self, message, projected=None):
        super().__init__(message)
        self.projected = projected


class InternalError(SoqcError, AssertionError):
    """An invariant that the mathematics guarantees was violated."""


class ReportIOError(SoqcError, OSError):
    """A report could not be written."""
