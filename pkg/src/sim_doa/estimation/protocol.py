"""
Snapshot protocol: reconfigure the input layer at every snapshot and record
the receiving array.

The observation window of T = T_x * T_y snapshots is split into T_y blocks of
T_x slots. At snapshot t the input layer applies a linear phase ramp that
shifts the incoming wave by a fraction of a DFT bin, so the N * T received
cells sample N * T distinct, uniformly spaced spatial frequencies.

The source symbol and the receiver noise are either redrawn at every snapshot
or drawn once for the whole observation window. The default draws one
unit-modulus symbol and one noise vector per observation window.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from typing import Optional, Tuple

import numpy as np
import pandas as pd
from pydantic import BaseModel, ConfigDict, Field

from sim_doa.core.dft import target_for
from sim_doa.core.geometry import ElectricalAngles, SimGeometry, split_index, steering_vector
from sim_doa.core.model import InputLayerPhases, SimState, transfer_matrix


class SourceModel(str, Enum):
    """How the source symbol s is drawn."""

    GAUSSIAN = "gaussian"  # CN(0, 1), redrawn every snapshot
    CONSTANT_MODULUS = "constant_modulus"  # exp(j theta), one theta per observation
    UNIT = "unit"  # s = 1


class NoiseModel(str, Enum):
    """How the receiver noise u is drawn."""

    PER_SNAPSHOT = "per_snapshot"
    PER_OBSERVATION = "per_observation"


class ProtocolConfig(BaseModel):
    """Observation settings for one estimation run."""

    model_config = ConfigDict(frozen=True, extra="forbid")

    t_x: int = Field(default=100, ge=1, description="Snapshots per block")
    t_y: int = Field(default=100, ge=1, description="Number of blocks")
    snr_db: float = Field(default=10.0, description="Per-element SNR in dB")
    seed: int = Field(default=0, ge=0, description="Seed for source and noise draws")
    source: SourceModel = Field(default=SourceModel.CONSTANT_MODULUS, description="Source symbol model")
    noise: NoiseModel = Field(default=NoiseModel.PER_OBSERVATION, description="Receiver noise model")
    noiseless: bool = Field(default=False, description="Drop the receiver noise term")
    noise_only: bool = Field(default=False, description="Drop the signal term (SNR of -inf dB)")
    gain_re: float = Field(default=1.0, description="Real part of the complex scale applied to the SIM response")
    gain_im: float = Field(default=0.0, description="Imaginary part of the complex scale applied to the SIM response")

    @property
    def snapshots(self) -> int:
        return self.t_x * self.t_y

    @property
    def snr_linear(self) -> float:
        if self.noise_only:
            return 0.0
        return 10.0 ** (self.snr_db / 10.0)

    @property
    def gain(self) -> complex:
        return complex(self.gain_re, self.gain_im)


@dataclass(frozen=True)
class SnapshotGrid:
    """Received samples r[n, t], shape (N, T)."""

    r: np.ndarray
    config: ProtocolConfig

    @property
    def energy(self) -> np.ndarray:
        return np.abs(self.r) ** 2

    def to_frame(self) -> pd.DataFrame:
        """Long table with columns n, t, re, im; rows run over t fastest."""
        n, t = np.meshgrid(np.arange(self.r.shape[0]), np.arange(self.r.shape[1]), indexing="ij")
        return pd.DataFrame(
            {
                "n": n.ravel(),
                "t": t.ravel(),
                "re": self.r.real.ravel(),
                "im": self.r.imag.ravel(),
            }
        )


def _schedule_phases(geom: SimGeometry, cfg: ProtocolConfig, t: np.ndarray) -> np.ndarray:
    """Input-layer phases for snapshots ``t``; shape (len(t), N), unwrapped."""
    n_index = np.arange(geom.n_elements)
    n_x, n_y = split_index(n_index, geom.n_x)
    t_x, t_y = split_index(np.asarray(t), cfg.t_x)
    return (
        -2.0 * math.pi * np.outer(t_x, n_x) / (geom.n_x * cfg.t_x)
        - 2.0 * math.pi * np.outer(t_y, n_y) / (geom.n_y * cfg.t_y)
    )


def input_phase_schedule(geom: SimGeometry, cfg: ProtocolConfig, t: int) -> InputLayerPhases:
    """Input-layer phases for snapshot ``t`` (0-based)."""
    if not 0 <= t < cfg.snapshots:
        raise IndexError(f"snapshot {t} outside 0..{cfg.snapshots - 1}")
    return InputLayerPhases(xi0=_schedule_phases(geom, cfg, np.array([t]))[0])


def scheduled_inputs(geom: SimGeometry, cfg: ProtocolConfig, psi: ElectricalAngles) -> np.ndarray:
    """Columns Y_{0,t} a(psi) for every snapshot, shape (N, T)."""
    phases = _schedule_phases(geom, cfg, np.arange(cfg.snapshots))
    return np.exp(1j * phases).T * steering_vector(geom, psi)[:, None]


def _complex_normal(rng: np.random.Generator, shape: Tuple[int, ...]) -> np.ndarray:
    return (rng.standard_normal(shape) + 1j * rng.standard_normal(shape)) / math.sqrt(2.0)


def source_symbols(rng: np.random.Generator, cfg: ProtocolConfig) -> np.ndarray:
    """Source symbol of every snapshot, shape (T,)."""
    t = cfg.snapshots
    if cfg.source is SourceModel.GAUSSIAN:
        return _complex_normal(rng, (t,))
    if cfg.source is SourceModel.CONSTANT_MODULUS:
        return np.full(t, np.exp(1j * rng.uniform(0.0, 2.0 * math.pi)))
    return np.ones(t, dtype=complex)


def receiver_noise(rng: np.random.Generator, n_elements: int, cfg: ProtocolConfig) -> np.ndarray:
    """Unit-variance CSCG noise, shape (N, T)."""
    if cfg.noise is NoiseModel.PER_SNAPSHOT:
        return _complex_normal(rng, (n_elements, cfg.snapshots))
    return np.repeat(_complex_normal(rng, (n_elements, 1)), cfg.snapshots, axis=1)


def _observe(
    operator: np.ndarray,
    geom: SimGeometry,
    psi: ElectricalAngles,
    cfg: ProtocolConfig,
) -> SnapshotGrid:
    # source first, then noise: equal seeds give common random numbers across SNRs and operators
    rng = np.random.default_rng(cfg.seed)
    source = source_symbols(rng, cfg)
    noise = receiver_noise(rng, geom.n_elements, cfg)

    signal = operator @ scheduled_inputs(geom, cfg, psi)
    r = math.sqrt(cfg.snr_linear) * signal * source[None, :]
    if not cfg.noiseless:
        r = r + noise
    return SnapshotGrid(r=r, config=cfg)


def simulate_snapshots(
    state: SimState,
    true_psi: ElectricalAngles,
    cfg: ProtocolConfig,
    response: Optional[np.ndarray] = None,
) -> SnapshotGrid:
    """
    Received grid through the trained SIM, scaled by ``cfg.gain``.

    ``response`` lets callers reuse a precomputed transfer matrix across trials.
    """
    g = transfer_matrix(state) if response is None else response
    return _observe(cfg.gain * g, state.stack.geometry, true_psi, cfg)


def digital_baseline_grid(
    geom: SimGeometry, true_psi: ElectricalAngles, cfg: ProtocolConfig
) -> SnapshotGrid:
    """Same protocol with the exact 2D DFT in place of the SIM (gain ignored)."""
    return _observe(target_for(geom).f, geom, true_psi, cfg)


__all__ = [
    "SourceModel",
    "NoiseModel",
    "ProtocolConfig",
    "SnapshotGrid",
    "input_phase_schedule",
    "scheduled_inputs",
    "source_symbols",
    "receiver_noise",
    "simulate_snapshots",
    "digital_baseline_grid",
]
