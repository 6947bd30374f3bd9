"""Target 2D DFT operator the SIM is trained to emulate."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from sim_doa.core.geometry import SimGeometry, split_index


@dataclass(frozen=True)
class TargetOperator:
    """Unnormalised N x N 2D DFT matrix F; entries have unit modulus."""

    f: np.ndarray
    n_x: int
    n_y: int

    @property
    def size(self) -> int:
        return self.n_x * self.n_y

    @property
    def energy(self) -> float:
        """||F||_F^2 = N^2."""
        return float(self.size**2)


def dft_matrix(n_x: int, n_y: int) -> TargetOperator:
    """
    Build F entry by entry from the x-major index decomposition.

    f[n, k] = exp(-j 2 pi n_x k_x / N_x) * exp(-j 2 pi n_y k_y / N_y)
    """
    if n_x < 1 or n_y < 1:
        raise ValueError("DFT grid dimensions must be >= 1")
    index = np.arange(n_x * n_y)
    ix, iy = split_index(index, n_x)
    phase_x = np.outer(ix, ix) / n_x
    phase_y = np.outer(iy, iy) / n_y
    f = np.exp(-2j * np.pi * phase_x) * np.exp(-2j * np.pi * phase_y)
    return TargetOperator(f=f, n_x=n_x, n_y=n_y)


def target_for(geom: SimGeometry) -> TargetOperator:
    return dft_matrix(geom.n_x, geom.n_y)


__all__ = ["TargetOperator", "dft_matrix", "target_for"]
