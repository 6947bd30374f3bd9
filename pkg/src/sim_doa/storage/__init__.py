"""
Storage module for sim-doa.

This module persists trained models, caches diffraction stacks and writes
result tables.
"""

from __future__ import annotations

from sim_doa.storage.artifacts import read_sidecar, write_table
from sim_doa.storage.model_store import ModelStore

__all__ = ["ModelStore", "write_table", "read_sidecar"]
