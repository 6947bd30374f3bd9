"""
Training module for sim-doa.

Gradient descent on the meta-atom phases towards the 2D DFT target.
"""

from __future__ import annotations

from sim_doa.training.trainer import (
    TrainConfig,
    TrainReport,
    gradient,
    loss,
    ls_beta,
    train,
    train_state,
)

__all__ = ["TrainConfig", "TrainReport", "loss", "ls_beta", "gradient", "train", "train_state"]
