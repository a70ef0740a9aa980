"""Centralized logging configuration for numberwall.

Provides structured logging for the engine, the verification suite and the CLI.
"""

import logging
import logging.handlers
import os
from pathlib import Path
from typing import Optional

# Environment variables
DEBUG_MODE = os.getenv("NWALL_DEBUG", "0") == "1"
LOG_LEVEL = os.getenv("NWALL_LOG_LEVEL", "DEBUG" if DEBUG_MODE else "INFO")

# Log directory configuration
NWALL_LOG_DIR = Path(os.getenv("NWALL_LOG_DIR", "logs/nwall"))

DETAILED_FORMAT = (
    "[%(asctime)s] [%(levelname)-8s] [%(name)s] [%(filename)s:%(lineno)d] %(message)s"
)
SIMPLE_FORMAT = "[%(asctime)s] [%(levelname)-8s] [%(name)s] %(message)s"

# Use detailed format in debug mode
LOG_FORMAT = DETAILED_FORMAT if DEBUG_MODE else SIMPLE_FORMAT


def _get_file_handler(log_file: Path, level: int) -> logging.FileHandler:
    """Create a rotating file handler for the given log file."""
    log_file.parent.mkdir(parents=True, exist_ok=True)
    handler = logging.handlers.RotatingFileHandler(
        log_file,
        maxBytes=10 * 1024 * 1024,  # 10 MB
        backupCount=5,
    )
    handler.setLevel(level)
    handler.setFormatter(logging.Formatter(LOG_FORMAT))
    return handler


def _get_console_handler(level: int) -> logging.StreamHandler:
    """Create a console handler for streaming logs."""
    handler = logging.StreamHandler()
    handler.setLevel(level)
    handler.setFormatter(logging.Formatter(LOG_FORMAT))
    return handler


def configure_nwall_logging(
    log_level: Optional[str] = None,
    include_console: bool = True,
    include_file: bool = True,
    log_dir: Optional[Path] = None,
) -> logging.Logger:
    """
    Configure the top-level "nwall" logger.

    Args:
        log_level: Log level (DEBUG, INFO, WARNING, ERROR, CRITICAL)
        include_console: Whether to also log to console
        include_file: Whether to write a rotating log file
        log_dir: Directory of the log file (default: NWALL_LOG_DIR)

    Returns:
        Configured logger instance
    """
    if log_level is None:
        log_level = LOG_LEVEL

    level = getattr(logging, log_level.upper(), logging.INFO)

    logger = logging.getLogger("nwall")
    logger.setLevel(level)

    # Remove existing handlers to avoid duplicates
    logger.handlers.clear()

    if include_file:
        logger.addHandler(_get_file_handler((log_dir or NWALL_LOG_DIR) / "nwall.log", level))

    if include_console:
        logger.addHandler(_get_console_handler(level))

    return logger


def configure_module_logging(module_name: str) -> logging.Logger:
    """
    Configure logging for a specific module.

    This creates a child logger under the "nwall" namespace that inherits
    its handlers and configuration.

    Args:
        module_name: Module name (e.g., "wall_engine", "verify")

    Returns:
        Configured logger instance
    """
    return logging.getLogger(f"nwall.{module_name}")


def get_nwall_logger() -> logging.Logger:
    """Get the main nwall logger (creates if doesn't exist)."""
    return logging.getLogger("nwall")


class StructuredLogContext:
    """Helper for adding context to log messages."""

    def __init__(self, **context):
        self.context = context

    def __str__(self):
        items = [f"{k}={v}" for k, v in self.context.items()]
        return " | ".join(items)


def setup_all_logging(log_level: Optional[str] = None, include_file: bool = True, log_dir: Optional[Path] = None):
    """Initialize all logging (call once at application startup)."""
    configure_nwall_logging(log_level=log_level, include_file=include_file, log_dir=log_dir)

    logger = get_nwall_logger()
    logger.info("=" * 70)
    logger.info("Numberwall Logging Initialized")
    logger.info("=" * 70)
    logger.info(f"Debug mode: {DEBUG_MODE}")
    logger.info(f"Log level: {log_level or LOG_LEVEL}")
    if include_file:
        logger.info(f"Log file: {(log_dir or NWALL_LOG_DIR) / 'nwall.log'}")
