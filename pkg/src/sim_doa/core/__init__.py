"""
Core numerics for sim-doa.

This module contains the array geometry, the diffraction model, the DFT
target and the SIM response.
"""

from __future__ import annotations

from sim_doa.core.dft import TargetOperator, dft_matrix, target_for
from sim_doa.core.geometry import (
    ElectricalAngles,
    PhysicalAngles,
    SimGeometry,
    atom_position,
    electrical_from_physical,
    steering_vector,
)
from sim_doa.core.model import (
    InputLayerPhases,
    SimState,
    cascade_partials,
    partial_cascades,
    transfer_matrix,
)
from sim_doa.core.propagation import DiffractionStack, build_stack, diffraction_coefficient

__all__ = [
    "SimGeometry",
    "ElectricalAngles",
    "PhysicalAngles",
    "electrical_from_physical",
    "steering_vector",
    "atom_position",
    "DiffractionStack",
    "diffraction_coefficient",
    "build_stack",
    "TargetOperator",
    "dft_matrix",
    "target_for",
    "SimState",
    "InputLayerPhases",
    "transfer_matrix",
    "cascade_partials",
    "partial_cascades",
]
