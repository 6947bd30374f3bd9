"""
Shared geometries, stacks and states for sim-doa tests.

Small geometries use a unit wavelength so distances read in wavelengths.
"""

import json
from pathlib import Path
from typing import Any, Dict

import numpy as np
import pytest

from sim_doa.core.geometry import SimGeometry
from sim_doa.core.propagation import DiffractionStack, build_stack
from sim_doa.core.model import SimState
from sim_doa.training.trainer import TrainConfig


@pytest.fixture
def reference_geometry() -> SimGeometry:
    """60 GHz, N = 4x4, M = 12x12, L = 9, layer spacing one wavelength."""
    return SimGeometry()


@pytest.fixture
def small_geometry() -> SimGeometry:
    """N = 2x2, M = 4x4, L = 2."""
    return SimGeometry.from_wavelength(1.0, n_side=2, m_side=4, num_layers=2)


@pytest.fixture
def small_stack(small_geometry: SimGeometry) -> DiffractionStack:
    return build_stack(small_geometry)


@pytest.fixture
def small_state(small_stack: DiffractionStack) -> SimState:
    rng = np.random.default_rng(1234)
    xi = rng.uniform(0.0, 2.0 * np.pi, size=(small_stack.num_layers, small_stack.n_atoms))
    return SimState(xi=xi, stack=small_stack)


@pytest.fixture
def quick_train() -> TrainConfig:
    return TrainConfig(max_iters=60, decay=0.95, seed=7, log_every=20, refine_iters=0)


@pytest.fixture
def small_run_config() -> Dict[str, Any]:
    """Run-config document for a fast end-to-end run."""
    return {
        "geometry": {
            "wavelength": 1.0,
            "n_x": 2,
            "n_y": 2,
            "d_x": 0.5,
            "d_y": 0.5,
            "m_x": 3,
            "m_y": 3,
            "s_x": 0.5,
            "s_y": 0.5,
            "num_layers": 2,
            "layer_spacing": 1.0,
        },
        "train": {"max_iters": 8, "decay": 0.9, "seed": 3, "refine_iters": 0},
        "experiment": {
            "zeta_values": [0.9, 0.95],
            "layer_values": [1, 2],
            "atom_values": [4, 9],
            "snr_values": [0.0, 10.0],
            "t_values": [2],
            "spectrum_t": 2,
            "psi_cases": [[0.3, -0.45], [-0.3, 0.1]],
            "trials": 3,
            "workers": 1,
        },
        "master_seed": 11,
    }


@pytest.fixture
def small_config_file(tmp_path: Path, small_run_config: Dict[str, Any]) -> Path:
    path = tmp_path / "run.json"
    path.write_text(json.dumps(small_run_config), encoding="utf-8")
    return path
