"""Error types raised by the Hurwitz Correlations core"""
from typing import Type


class HurwitzError(Exception):
    """Base class for every error raised by this package."""


class DomainError(HurwitzError, ValueError):
    """Argument outside the mathematical domain of an operation."""


class RangeError(HurwitzError, ValueError):
    """Request reaches beyond the limit of a precomputed table."""


class PreconditionError(HurwitzError, ValueError):
    """Arguments violate an operation's stated precondition."""


class CapacityError(HurwitzError):
    """Requested table does not fit the addressable cell storage."""


class CellOverflowError(HurwitzError, OverflowError):
    """Accumulated class-number cell exceeds the 32-bit cell width."""


class DegenerateGridError(HurwitzError, ValueError):
    """Grid too short or too narrow for a log-log fit."""


class ZeroResidualError(HurwitzError):
    """Every residual on the grid is exactly zero (shift congruent to 2 mod 4)."""


class UnsupportedFamilyError(HurwitzError, ValueError):
    """Smooth weight family without a closed-form Mellin transform."""


class TableFormatError(HurwitzError):
    """Table file cannot be decoded."""


class CorruptHeaderError(TableFormatError):
    pass


class TruncatedPayloadError(TableFormatError):
    pass


class VersionMismatchError(TableFormatError):
    pass


def require(condition: bool, error: Type[HurwitzError], message: str) -> None:
    """Raise ``error(message)`` unless ``condition`` holds."""
    if not condition:
        raise error(message)
