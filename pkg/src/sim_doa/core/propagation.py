"""
Rayleigh-Sommerfeld coupling between adjacent SIM layers.

The receiver mirrors the input layer across the stack, so the last coupling
matrix is the plain transpose of the first one. Intermediate layers are
isomorphic and evenly spaced, so a single M x M matrix serves every
intermediate gap.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import List

import numpy as np
from scipy.spatial.distance import cdist

from sim_doa.core.geometry import SimGeometry, layer_positions
from sim_doa.utils.logger import logger


@dataclass(frozen=True)
class DiffractionStack:
    """Coupling matrices W_0 (M x N), W_1..W_{L-1} (shared M x M) and W_L = W_0^T."""

    w_in: np.ndarray
    w_mid: np.ndarray
    geometry: SimGeometry

    @property
    def num_layers(self) -> int:
        return self.geometry.num_layers

    @property
    def w_out(self) -> np.ndarray:
        return self.w_in.T

    @property
    def mid_layers(self) -> List[np.ndarray]:
        """W_1..W_{L-1}; every slot refers to the same array."""
        return [self.w_mid] * (self.num_layers - 1)

    @property
    def n_elements(self) -> int:
        return self.w_in.shape[1]

    @property
    def n_atoms(self) -> int:
        return self.w_in.shape[0]


def diffraction_coefficient(geom: SimGeometry, distance: np.ndarray | float) -> np.ndarray | complex:
    """A * s_layer / (2 pi d^3) * (1 - j kappa d) * exp(j kappa d)."""
    d = np.asarray(distance, dtype=float)
    if np.any(d <= 0):
        raise ValueError("propagation distance must be positive")
    kappa = geom.wavenumber
    coeff = (
        geom.meta_atom_area * geom.layer_spacing / (2.0 * np.pi * d**3)
        * (1.0 - 1j * kappa * d)
        * np.exp(1j * kappa * d)
    )
    return complex(coeff) if coeff.ndim == 0 else coeff


def coupling_matrix(geom: SimGeometry, dst_layer: int, src_layer: int) -> np.ndarray:
    """Entry (i, j) couples element j of ``src_layer`` into element i of ``dst_layer``."""
    distances = cdist(layer_positions(geom, dst_layer), layer_positions(geom, src_layer))
    return diffraction_coefficient(geom, distances)


def build_stack(geom: SimGeometry) -> DiffractionStack:
    logger.debug(
        f"Building diffraction stack: L={geom.num_layers}, M={geom.n_atoms}, N={geom.n_elements}"
    )
    w_in = coupling_matrix(geom, 1, 0)
    if geom.num_layers > 1:
        w_mid = coupling_matrix(geom, 2, 1)
    else:
        # no intermediate gap; keep an empty placeholder of the right dtype
        w_mid = np.zeros((geom.n_atoms, geom.n_atoms), dtype=complex)
    return DiffractionStack(w_in=w_in, w_mid=w_mid, geometry=geom)


__all__ = ["DiffractionStack", "diffraction_coefficient", "coupling_matrix", "build_stack"]
