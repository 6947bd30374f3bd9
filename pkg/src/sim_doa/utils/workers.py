"""Worker-count resolution for Monte Carlo fan-out."""

from __future__ import annotations

import os
from typing import Optional

import psutil

from sim_doa.utils.logger import logger

WORKERS_ENV = "SIM_DOA_WORKERS"


def resolve_workers(requested: Optional[int] = None) -> int:
    """
    Number of worker processes to use.

    An explicit request wins, then ``SIM_DOA_WORKERS``, then 1. The result is
    capped at the logical CPU count reported by psutil.
    """
    value = requested
    if value is None:
        raw = os.getenv(WORKERS_ENV)
        if raw:
            try:
                value = int(raw)
            except ValueError:
                logger.warning(f"Ignoring non-integer {WORKERS_ENV}={raw!r}")
                value = None
    if value is None or value < 1:
        return 1

    cpu_count = psutil.cpu_count() or 1
    if value > cpu_count:
        logger.info(f"Capping workers at {cpu_count} (requested {value})")
        return cpu_count
    return value
