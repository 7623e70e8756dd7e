"""Exception hierarchy for the TRNG pipeline and its certification suite.

Each error carries a machine-readable code and the process exit status the CLI maps it to,
so commands and the MCP router can report failures uniformly.
"""

from __future__ import annotations

from typing import Any

from .constants import EXIT_CONFIG, EXIT_DEGENERATE, EXIT_FAILURE, EXIT_IO, EXIT_PIPE_CLOSED


class SoftSpongeError(Exception):
    """Base exception for all softsponge errors."""

    error_code: str = ""
    exit_code: int = EXIT_FAILURE

    def __init__(self, message: str, error_code: str | None = None, **kwargs: Any):
        super().__init__(message)
        self.message = message
        self.error_code = error_code or self.__class__.__name__
        self.__dict__.update(kwargs)

    def to_dict(self) -> dict[str, Any]:
        """Convert error to a serializable dict."""
        result: dict[str, Any] = {
            "error": True,
            "error_type": self.__class__.__name__,
            "error_code": self.error_code,
            "message": self.message,
        }
        result.update(
            {k: v for k, v in self.__dict__.items() if k not in ["message", "error_code"]}
        )
        return result


class ValidationError(SoftSpongeError):
    """Raised when an operation is called outside its contract."""

    error_code = "CONTRACT_VIOLATION"
    exit_code = EXIT_CONFIG

    def __init__(self, message: str, field: str | None = None, **kwargs: Any):
        super().__init__(message, "CONTRACT_VIOLATION", field=field, **kwargs)


class ConfigError(SoftSpongeError):
    """Raised when a config file or CLI override is malformed."""

    error_code = "CONFIG_ERROR"
    exit_code = EXIT_CONFIG

    def __init__(self, message: str, key: str | None = None, **kwargs: Any):
        super().__init__(message, "CONFIG_ERROR", key=key, **kwargs)


class InvalidGeometryError(SoftSpongeError):
    """Raised when a device geometry has no stages or no segments."""

    error_code = "INVALID_GEOMETRY"
    exit_code = EXIT_CONFIG

    def __init__(self, message: str, geometry: dict[str, int] | None = None, **kwargs: Any):
        super().__init__(message, "INVALID_GEOMETRY", geometry=geometry, **kwargs)


class DegenerateRangeError(SoftSpongeError):
    """Raised when GPEV sees a DVD distribution narrower than one TDC count."""

    error_code = "DEGENERATE_RANGE"
    exit_code = EXIT_DEGENERATE

    def __init__(
        self,
        message: str,
        iteration: int | None = None,
        range_counts: float | None = None,
        **kwargs: Any,
    ):
        super().__init__(
            message, "DEGENERATE_RANGE", iteration=iteration, range_counts=range_counts, **kwargs
        )


class UndefinedCorrelationError(SoftSpongeError):
    """Raised when a correlation is requested for a constant vector."""

    error_code = "UNDEFINED_CORRELATION"

    def __init__(self, message: str, **kwargs: Any):
        super().__init__(message, "UNDEFINED_CORRELATION", **kwargs)


class InsufficientDataError(SoftSpongeError):
    """Raised when a statistical test gets fewer bits than it needs."""

    error_code = "INSUFFICIENT_DATA"

    def __init__(
        self,
        message: str,
        test: str | None = None,
        required_bits: int | None = None,
        available_bits: int | None = None,
        **kwargs: Any,
    ):
        super().__init__(
            message,
            "INSUFFICIENT_DATA",
            test=test,
            required_bits=required_bits,
            available_bits=available_bits,
            **kwargs,
        )


class BitIOError(SoftSpongeError):
    """Raised when bits, traces or reports cannot be read or written."""

    error_code = "BIT_IO_ERROR"
    exit_code = EXIT_IO

    def __init__(self, message: str, path: str | None = None, **kwargs: Any):
        super().__init__(message, "BIT_IO_ERROR", path=path, **kwargs)


class PipeClosedError(SoftSpongeError):
    """Raised when the reader of stdout goes away mid-stream."""

    error_code = "PIPE_CLOSED"
    exit_code = EXIT_PIPE_CLOSED

    def __init__(self, message: str = "output pipe closed by reader", **kwargs: Any):
        super().__init__(message, "PIPE_CLOSED", **kwargs)


class CommandExecutionError(SoftSpongeError):
    """Raised when a registered command fails for a reason of its own."""

    error_code = "COMMAND_EXECUTION_ERROR"

    def __init__(self, message: str, command: str | None = None, **kwargs: Any):
        super().__init__(message, "COMMAND_EXECUTION_ERROR", command=command, **kwargs)


__all__ = [
    "SoftSpongeError",
    "ValidationError",
    "ConfigError",
    "InvalidGeometryError",
    "DegenerateRangeError",
    "UndefinedCorrelationError",
    "InsufficientDataError",
    "BitIOError",
    "PipeClosedError",
    "CommandExecutionError",
]
