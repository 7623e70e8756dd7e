"""Logging infrastructure for the TRNG pipeline.

Provides structured logging with configurable levels and run tracking. Records go to
stderr: stdout is reserved for raw bit streams piped into external test tools.
"""

from __future__ import annotations

import logging
import os
import sys
import uuid
from contextvars import ContextVar
from typing import Any

# Run ID tracking for correlating cycle/phase messages of one invocation
run_id_ctx: ContextVar[str | None] = ContextVar("run_id", default=None)


def get_run_id() -> str | None:
    """Get the current run ID if available."""
    return run_id_ctx.get()


def new_run_id() -> str:
    """Start a new run and return its ID."""
    run_id = uuid.uuid4().hex[:8]
    run_id_ctx.set(run_id)
    return run_id


class _RunIdFilter(logging.Filter):
    """Guarantee every record has a run_id attribute for the formatter."""

    def filter(self, record: logging.LogRecord) -> bool:
        if not hasattr(record, "run_id"):
            record.run_id = get_run_id() or "-"
        return True


def setup_logging(
    level: int | str | None = None,
    format_string: str | None = None,
) -> logging.Logger:
    """Configure logging for the application.

    Args:
        level: Logging level (e.g., 'DEBUG', 'INFO', 'ERROR').
               Defaults to LOGGING_LEVEL env var or 'INFO'.
        format_string: Custom log format string. Defaults to a structured format.

    Returns:
        The root logger configured for the application.
    """
    if level is None:
        level = os.environ.get("LOGGING_LEVEL", "INFO")

    if format_string is None:
        format_string = "%(asctime)s [%(levelname)s] [%(name)s] [run=%(run_id)s] %(message)s"

    logger = logging.getLogger()
    logger.setLevel(level)
    logger.handlers.clear()

    console_handler = logging.StreamHandler(sys.stderr)
    console_handler.setLevel(level)
    console_handler.setFormatter(logging.Formatter(format_string))
    console_handler.addFilter(_RunIdFilter())
    logger.addHandler(console_handler)

    # fastmcp pulls in chatty transports when the server extra is installed
    for noisy in ("asyncio", "httpx", "mcp"):
        logging.getLogger(noisy).setLevel("WARNING")
        logging.getLogger(noisy).propagate = False

    return logger


class RunLoggerAdapter(logging.LoggerAdapter[Any]):
    """Logger adapter that automatically adds the run ID to log records."""

    def process(self, msg: str, kwargs: Any) -> tuple[str, Any]:
        """Process the log record and add run context."""
        extra = kwargs.get("extra")
        if extra is None:
            extra = {}
        run_id = get_run_id()
        if run_id is not None:
            extra["run_id"] = run_id
        kwargs["extra"] = extra
        return msg, kwargs


def get_logger(name: str) -> RunLoggerAdapter:
    """Get a logger for the given module name.

    Args:
        name: The module name (e.g., __name__).

    Returns:
        A configured logger with run context support.
    """
    return RunLoggerAdapter(logging.getLogger(name), {})


def create_logger(name: str) -> RunLoggerAdapter:
    """Create and return a logger for a module.

    Args:
        name: The module name (typically __name__).

    Returns:
        A configured logger instance.
    """
    return get_logger(name)
