"""
DOA recovery from a snapshot grid.

The strongest cell (n, t) identifies a coarse DFT bin through n and a
fractional-bin offset through t; together they index the combined grid of
N * T electrical angles.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Tuple

import numpy as np

from sim_doa.core.geometry import (
    ElectricalAngles,
    PhysicalAngles,
    SimGeometry,
    split_index,
    wrap_to_2pi,
)
from sim_doa.errors import NonPhysicalDirectionError
from sim_doa.estimation.protocol import ProtocolConfig, SnapshotGrid
from sim_doa.utils.logger import get_logger

logger = get_logger("sim-doa.estimator")

# slack for round-off when the visible-disk radius is exactly one
_DISK_TOLERANCE = 1e-12


def wrap_unit(value: np.ndarray | float) -> np.ndarray | float:
    """Wrap pi-unit angles into [-1, 1)."""
    wrapped = np.mod(np.asarray(value, dtype=float) + 1.0, 2.0) - 1.0
    wrapped = np.where(wrapped >= 1.0, wrapped - 2.0, wrapped)
    return float(wrapped) if np.ndim(wrapped) == 0 else wrapped


@dataclass(frozen=True)
class DoaEstimate:
    n_hat: int
    t_hat: int
    psi_hat: ElectricalAngles
    physical_hat: Optional[PhysicalAngles] = None


def peak_search(grid: SnapshotGrid) -> Tuple[int, int]:
    """Index of the strongest cell; ties go to the smallest t, then the smallest n."""
    energy = grid.energy
    if energy.size == 0:
        raise ValueError("empty snapshot grid")
    t_hat, n_hat = divmod(int(np.argmax(energy.T)), energy.shape[0])
    return n_hat, t_hat


def _fine_index(n_hat: int, t_hat: int, geom: SimGeometry, cfg: ProtocolConfig) -> Tuple[int, int]:
    n_x, n_y = split_index(n_hat, geom.n_x)
    t_x, t_y = split_index(t_hat, cfg.t_x)
    return int(n_x) * cfg.t_x + int(t_x), int(n_y) * cfg.t_y + int(t_y)


def electrical_from_peak(
    geom: SimGeometry, cfg: ProtocolConfig, n_hat: int, t_hat: int
) -> ElectricalAngles:
    if not 0 <= n_hat < geom.n_elements or not 0 <= t_hat < cfg.snapshots:
        raise IndexError(f"peak ({n_hat}, {t_hat}) outside the {geom.n_elements} x {cfg.snapshots} grid")
    k_x, k_y = _fine_index(n_hat, t_hat, geom, cfg)
    psi_x = wrap_unit(2.0 * k_x / (geom.n_x * cfg.t_x))
    psi_y = wrap_unit(2.0 * k_y / (geom.n_y * cfg.t_y))
    return ElectricalAngles(psi_x * math.pi, psi_y * math.pi)


def combined_grid(geom: SimGeometry, cfg: ProtocolConfig) -> Tuple[np.ndarray, np.ndarray]:
    """Electrical angles (pi units) sampled by every cell, each of shape (N, T)."""
    n_x, n_y = split_index(np.arange(geom.n_elements), geom.n_x)
    t_x, t_y = split_index(np.arange(cfg.snapshots), cfg.t_x)
    k_x = np.add.outer(n_x * cfg.t_x, t_x)
    k_y = np.add.outer(n_y * cfg.t_y, t_y)
    return (
        wrap_unit(2.0 * k_x / (geom.n_x * cfg.t_x)),
        wrap_unit(2.0 * k_y / (geom.n_y * cfg.t_y)),
    )


def nearest_grid_point(
    geom: SimGeometry, cfg: ProtocolConfig, psi: ElectricalAngles
) -> Tuple[int, int]:
    """(n, t) of the combined-grid cell closest to ``psi`` on the torus."""
    psi_x, psi_y = psi.in_pi_units()
    span_x, span_y = geom.n_x * cfg.t_x, geom.n_y * cfg.t_y
    k_x = int(np.round(psi_x * span_x / 2.0)) % span_x
    k_y = int(np.round(psi_y * span_y / 2.0)) % span_y
    n_x, t_x = divmod(k_x, cfg.t_x)
    n_y, t_y = divmod(k_y, cfg.t_y)
    return n_y * geom.n_x + n_x, t_y * cfg.t_x + t_x


def laminated_spectrum(
    grid: SnapshotGrid, geom: SimGeometry
) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    """
    Rearrange the N x T energy map by fine spatial frequency.

    Returns:
        (psi_x_axis, psi_y_axis, image) with axes ascending over [-1, 1) and
        image[i, j] the energy at (psi_y_axis[i], psi_x_axis[j]).
    """
    cfg = grid.config
    span_x, span_y = geom.n_x * cfg.t_x, geom.n_y * cfg.t_y
    n_x, n_y = split_index(np.arange(geom.n_elements), geom.n_x)
    t_x, t_y = split_index(np.arange(cfg.snapshots), cfg.t_x)
    k_x = np.add.outer(n_x * cfg.t_x, t_x)
    k_y = np.add.outer(n_y * cfg.t_y, t_y)

    image = np.zeros((span_y, span_x))
    image[k_y, k_x] = grid.energy
    axis_x = wrap_unit(2.0 * np.arange(span_x) / span_x)
    axis_y = wrap_unit(2.0 * np.arange(span_y) / span_y)
    return np.fft.fftshift(axis_x), np.fft.fftshift(axis_y), np.fft.fftshift(image)


def physical_from_electrical(geom: SimGeometry, psi: ElectricalAngles) -> PhysicalAngles:
    kappa = geom.wavenumber
    u = psi.psi_x / (kappa * geom.d_x)  # sin(elevation) cos(azimuth)
    v = psi.psi_y / (kappa * geom.d_y)  # sin(elevation) sin(azimuth)
    radius = math.hypot(u, v)
    if radius > 1.0 + _DISK_TOLERANCE:
        raise NonPhysicalDirectionError(
            f"non-physical direction: electrical angles ({psi.psi_x:.4f}, {psi.psi_y:.4f}) "
            f"lie outside the visible region (radius {radius:.4f})"
        )
    elevation = math.asin(min(radius, 1.0))
    azimuth = float(wrap_to_2pi(math.atan2(v, u))) if radius > 0.0 else 0.0
    return PhysicalAngles(azimuth=azimuth, elevation=elevation)


def mse(true: ElectricalAngles, est: ElectricalAngles) -> float:
    """Mean squared torus distance over both axes, in pi units."""
    true_x, true_y = true.in_pi_units()
    est_x, est_y = est.in_pi_units()
    dx = wrap_unit(est_x - true_x)
    dy = wrap_unit(est_y - true_y)
    return float((dx**2 + dy**2) / 2.0)


def estimate(grid: SnapshotGrid, geom: SimGeometry) -> DoaEstimate:
    """Peak search, electrical-angle reconstruction and, when possible, physical angles."""
    n_hat, t_hat = peak_search(grid)
    psi_hat = electrical_from_peak(geom, grid.config, n_hat, t_hat)
    try:
        physical = physical_from_electrical(geom, psi_hat)
    except NonPhysicalDirectionError as e:
        logger.debug(f"No physical direction for estimate: {e}")
        physical = None
    return DoaEstimate(n_hat=n_hat, t_hat=t_hat, psi_hat=psi_hat, physical_hat=physical)


__all__ = [
    "DoaEstimate",
    "wrap_unit",
    "peak_search",
    "electrical_from_peak",
    "combined_grid",
    "nearest_grid_point",
    "laminated_spectrum",
    "physical_from_electrical",
    "mse",
    "estimate",
]
