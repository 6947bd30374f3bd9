"""
Experiments module for sim-doa.

Convergence, layer/size sweep, MSE versus SNR and spatial-spectrum runs,
each emitting CSV tables with JSON sidecars.
"""

from __future__ import annotations

from sim_doa.experiments.runner import (
    ExperimentResult,
    run_convergence,
    run_experiment,
    run_layer_sweep,
    run_mse_vs_snr,
    run_spectrum,
    train_reference,
    write_results,
)
from sim_doa.experiments.spec import ExperimentKind, ExperimentSettings, ExperimentSpec

__all__ = [
    "ExperimentKind",
    "ExperimentSettings",
    "ExperimentSpec",
    "ExperimentResult",
    "train_reference",
    "run_convergence",
    "run_layer_sweep",
    "run_mse_vs_snr",
    "run_spectrum",
    "run_experiment",
    "write_results",
]
