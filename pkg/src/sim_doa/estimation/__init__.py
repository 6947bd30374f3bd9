"""
Estimation module for sim-doa.

Snapshot protocol simulation and DOA recovery.
"""

from __future__ import annotations

from sim_doa.estimation.estimator import (
    DoaEstimate,
    combined_grid,
    electrical_from_peak,
    estimate,
    laminated_spectrum,
    mse,
    nearest_grid_point,
    peak_search,
    physical_from_electrical,
)
from sim_doa.estimation.protocol import (
    NoiseModel,
    ProtocolConfig,
    SnapshotGrid,
    SourceModel,
    digital_baseline_grid,
    input_phase_schedule,
    simulate_snapshots,
)

__all__ = [
    "ProtocolConfig",
    "SourceModel",
    "NoiseModel",
    "SnapshotGrid",
    "input_phase_schedule",
    "simulate_snapshots",
    "digital_baseline_grid",
    "DoaEstimate",
    "peak_search",
    "electrical_from_peak",
    "physical_from_electrical",
    "combined_grid",
    "nearest_grid_point",
    "laminated_spectrum",
    "mse",
    "estimate",
]
