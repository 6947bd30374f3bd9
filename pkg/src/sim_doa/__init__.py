"""
sim-doa - 2D direction-of-arrival estimation with a stacked intelligent metasurface.

This package provides:
- Rayleigh-Sommerfeld modelling of a multi-layer metasurface stack
- Gradient-descent fitting of the stack to the 2D DFT
- A snapshot protocol and peak-search DOA estimator
- Reproducible experiment runners with CSV/JSON outputs
"""

from __future__ import annotations

__version__ = "1.0.0"

# Core exports
from sim_doa.core.geometry import ElectricalAngles, PhysicalAngles, SimGeometry
from sim_doa.core.model import SimState, transfer_matrix
from sim_doa.estimation.estimator import estimate
from sim_doa.storage.model_store import ModelStore
from sim_doa.training.trainer import TrainConfig, train
from sim_doa.utils.logger import get_logger

__all__ = [
    "SimGeometry",
    "ElectricalAngles",
    "PhysicalAngles",
    "SimState",
    "transfer_matrix",
    "TrainConfig",
    "train",
    "estimate",
    "ModelStore",
    "get_logger",
    "__version__",
]
