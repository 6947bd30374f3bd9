"""
Logging configuration for sim-doa.

This module provides centralized logging configuration for the entire
package. Records go to stderr so that commands printing machine-readable
output on stdout stay parseable.
"""

from __future__ import annotations

import logging
import os
import sys
from typing import Optional

ROOT_LOGGER = "sim-doa"


def get_logger(name: Optional[str] = None) -> logging.Logger:
    """
    Get a configured logger instance.

    Args:
        name: Logger name. If None, uses the default package name.

    Returns:
        Configured logger instance.
    """
    if name is None:
        name = ROOT_LOGGER

    logger_instance = logging.getLogger(name)

    # children such as "sim-doa.trainer" propagate to the package logger
    if name.startswith(ROOT_LOGGER + "."):
        get_logger(ROOT_LOGGER)
        return logger_instance

    # Only configure if not already configured
    if not logger_instance.handlers:
        configure_logger(logger_instance)

    return logger_instance


def configure_logger(logger_instance: logging.Logger) -> None:
    """
    Configure a logger instance with a single console handler.

    The level comes from the ``LOG_LEVEL`` environment variable (default INFO).

    Args:
        logger_instance: Logger instance to configure.
    """
    level_name = os.getenv("LOG_LEVEL", "INFO").upper()
    logger_instance.setLevel(getattr(logging, level_name, logging.INFO))

    formatter = logging.Formatter(
        '[%(asctime)s] [%(name)s] [%(levelname)s] %(message)s'
    )

    console_handler = logging.StreamHandler(sys.stderr)
    console_handler.setFormatter(formatter)
    logger_instance.addHandler(console_handler)


logger = get_logger(ROOT_LOGGER)


__all__ = ["get_logger", "logger", "configure_logger", "ROOT_LOGGER"]
