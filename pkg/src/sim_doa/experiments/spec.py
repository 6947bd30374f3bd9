"""Experiment descriptions shared by the runners, the CLI and the config loader."""

from __future__ import annotations

import math
from enum import Enum
from typing import List, Optional, Tuple

from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from sim_doa.core.geometry import SimGeometry
from sim_doa.estimation.protocol import ProtocolConfig
from sim_doa.training.trainer import TrainConfig

DEFAULT_PSI_CASES: List[Tuple[float, float]] = [
    (-0.67, -0.48),
    (0.53, -0.34),
    (-0.52, 0.41),
    (0.44, 0.33),
]


class ExperimentKind(str, Enum):
    CONVERGENCE = "convergence"
    LAYER_SWEEP = "layer_sweep"
    MSE_VS_SNR = "mse_vs_snr"
    SPECTRUM = "spectrum"


class ExperimentSettings(BaseModel):
    """Sweep lists and Monte Carlo sizes; defaults follow the reference simulation setup."""

    model_config = ConfigDict(frozen=True, extra="forbid")

    zeta_values: List[float] = Field(default_factory=lambda: [0.9, 0.95, 0.99])
    layer_values: List[int] = Field(default_factory=lambda: list(range(1, 11)))
    atom_values: List[int] = Field(
        default_factory=lambda: [64, 100, 144, 196],
        description="Meta-atoms per layer; each must be a perfect square",
    )
    snr_values: List[float] = Field(default_factory=lambda: [-10.0, -5.0, 0.0, 5.0, 10.0, 15.0, 20.0])
    t_values: List[int] = Field(
        default_factory=lambda: [25, 100], description="Snapshots per block (T_x = T_y)"
    )
    spectrum_t: int = Field(default=32, ge=1, description="T_x = T_y for the spatial-spectrum run")
    psi_cases: List[Tuple[float, float]] = Field(
        default_factory=lambda: list(DEFAULT_PSI_CASES),
        description="Electrical angles (pi units) for the spatial-spectrum run",
    )
    trials: int = Field(default=100, ge=1, description="Monte Carlo trials per SNR point")
    workers: Optional[int] = Field(default=None, ge=1, description="Worker processes; SIM_DOA_WORKERS when unset")

    @field_validator("zeta_values")
    @classmethod
    def _zeta_in_range(cls, values: List[float]) -> List[float]:
        for zeta in values:
            if not 0.0 < zeta < 1.0:
                raise ValueError(f"decay {zeta} outside (0, 1)")
        return values

    @field_validator("atom_values")
    @classmethod
    def _square_layers(cls, values: List[int]) -> List[int]:
        for m in values:
            if m < 1 or math.isqrt(m) ** 2 != m:
                raise ValueError(f"meta-atom count {m} is not a positive perfect square")
        return values

    @field_validator("layer_values", "t_values")
    @classmethod
    def _positive_counts(cls, values: List[int]) -> List[int]:
        if any(v < 1 for v in values):
            raise ValueError("counts must be >= 1")
        return values


class ExperimentSpec(BaseModel):
    """Everything one experiment run needs; serialised verbatim into the result sidecar."""

    model_config = ConfigDict(frozen=True, extra="forbid")

    kind: ExperimentKind
    geometry: SimGeometry = Field(default_factory=SimGeometry)
    train: TrainConfig = Field(default_factory=TrainConfig)
    protocol: ProtocolConfig = Field(default_factory=ProtocolConfig)
    experiment: ExperimentSettings = Field(default_factory=ExperimentSettings)
    master_seed: int = Field(default=0, ge=0, description="Seed for Monte Carlo draws")

    @model_validator(mode="after")
    def _sweeps_present(self) -> "ExperimentSpec":
        required = {
            ExperimentKind.CONVERGENCE: ("zeta_values",),
            ExperimentKind.LAYER_SWEEP: ("layer_values", "atom_values"),
            ExperimentKind.MSE_VS_SNR: ("snr_values", "t_values"),
            ExperimentKind.SPECTRUM: ("psi_cases",),
        }[self.kind]
        for name in required:
            if not getattr(self.experiment, name):
                raise ValueError(f"{self.kind.value} needs a non-empty {name}")
        return self


__all__ = ["ExperimentKind", "ExperimentSettings", "ExperimentSpec", "DEFAULT_PSI_CASES"]
