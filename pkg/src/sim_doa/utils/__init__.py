"""
Utilities module for sim-doa.

This module provides common utilities like logging configuration and the
worker-count helper.
"""

from __future__ import annotations

from sim_doa.utils.logger import get_logger, logger
from sim_doa.utils.workers import resolve_workers

__all__ = ["get_logger", "logger", "resolve_workers"]
