"""
Exception types for HRCP-Incremental.

Every error raised by the library derives from HRCPError and from the
closest builtin exception, so callers may catch either.
"""


class HRCPError(Exception):
    """Base class for all library errors."""


class DimensionMismatchError(HRCPError, ValueError):
    """Points, boxes or instances of different dimension were combined."""


class ParameterError(HRCPError, ValueError):
    """A configuration or operation parameter is outside its valid range."""


class InstanceParseError(HRCPError, ValueError):
    """
    An instance, labels or solution file could not be parsed.

    Attributes:
        line: 1-based line number where parsing failed (None if unknown)
    """

    def __init__(self, message: str, line: int = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class ContractViolationError(HRCPError, RuntimeError):
    """An operation was called while its precondition does not hold."""


class SizeGuardError(HRCPError, ValueError):
    """The instance is too large for an exhaustive method."""


class UnsupportedDimensionError(HRCPError, ValueError):
    """The operation only supports a specific dimension."""
