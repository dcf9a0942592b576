"""Exception hierarchy shared by every module."""

from __future__ import annotations


class LogTangentError(Exception):
    """Base class for all library errors."""


class ParseError(LogTangentError, ValueError):
    """Malformed arrangement or orbifold input."""

    def __init__(self, message: str, hyperplane: int | None = None) -> None:
        if hyperplane is not None:
            message = f"hyperplane {hyperplane}: {message}"
        super().__init__(message)
        self.hyperplane = hyperplane


class DegenerateArrangementError(LogTangentError, ValueError):
    """The arrangement is not in general position (or too small) for the request."""


class InconsistencyError(LogTangentError, RuntimeError):
    """Two independent computations disagree; indicates a bug or a mislabelled input."""


class TruncationError(LogTangentError, ArithmeticError):
    """A truncated power series is too short to decide the requested valuation."""


class WitnessError(LogTangentError, ValueError):
    """A supplied witness does not satisfy the system it is meant to solve."""
