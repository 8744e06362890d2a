"""Structured logging for the wsncalc CLI and library.

structlog renders through the stdlib logging module. Records go to stderr by
default so that tables, CSV and JSON written to stdout stay machine-readable.
Each CLI run binds the command and scenario reference as context variables.
"""

import logging
import sys
from typing import TextIO

import structlog

LOG_FORMATS = ("json", "console")

logger = structlog.get_logger()


def _renderer(log_format: str) -> structlog.types.Processor:
    if log_format not in LOG_FORMATS:
        raise ValueError(
            f"log_format must be one of {', '.join(LOG_FORMATS)}, got {log_format!r}"
        )
    if log_format == "json":
        return structlog.processors.JSONRenderer(sort_keys=True)
    return structlog.dev.ConsoleRenderer(colors=False)


def configure_logging(
    log_level: str = "WARNING", log_format: str = "console", stream: TextIO | None = None
) -> None:
    """Route structlog and stdlib records through one formatter.

    Args:
        log_level: DEBUG, INFO, WARNING, ERROR or CRITICAL; unknown names fall back to WARNING.
        log_format: "json" (one sorted-key object per line) or "console".
        stream: Destination, stderr when omitted.

    Raises:
        ValueError: for an unknown log_format.
    """
    numeric_level = getattr(logging, log_level.upper(), logging.WARNING)
    renderer = _renderer(log_format)

    shared_processors: list[structlog.types.Processor] = [
        structlog.contextvars.merge_contextvars,
        structlog.stdlib.add_logger_name,
        structlog.stdlib.add_log_level,
        structlog.processors.TimeStamper(fmt="iso"),
        structlog.processors.StackInfoRenderer(),
        structlog.processors.UnicodeDecoder(),
    ]

    structlog.configure(
        processors=[
            *shared_processors,
            structlog.stdlib.ProcessorFormatter.wrap_for_formatter,
        ],
        logger_factory=structlog.stdlib.LoggerFactory(),
        wrapper_class=structlog.stdlib.BoundLogger,
        # the CLI reconfigures per invocation
        cache_logger_on_first_use=False,
    )

    formatter = structlog.stdlib.ProcessorFormatter(
        processors=[
            structlog.stdlib.ProcessorFormatter.remove_processors_meta,
            renderer,
        ],
        foreign_pre_chain=shared_processors,
    )

    handler = logging.StreamHandler(stream if stream is not None else sys.stderr)
    handler.setFormatter(formatter)

    root_logger = logging.getLogger()
    root_logger.handlers.clear()
    root_logger.addHandler(handler)
    root_logger.setLevel(numeric_level)

    logger.debug("logging_configured", level=logging.getLevelName(numeric_level), format=log_format)


def bind_run_context(command: str, scenario: str) -> None:
    """Replace the context of the previous run with this command and scenario reference."""
    structlog.contextvars.clear_contextvars()
    structlog.contextvars.bind_contextvars(command=command, scenario=scenario)
