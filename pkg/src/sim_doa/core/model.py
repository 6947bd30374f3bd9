"""
Trainable SIM state and its end-to-end response.

G = W_L Y_L W_{L-1} ... W_2 Y_2 W_1 Y_1 W_0 with Y_l = diag(exp(j xi_l)).
Forward partials Q_l = W_{l-1} Y_{l-1} ... Y_1 W_0 (M x N) and backward
partials B_l = W_L Y_L ... Y_{l+1} W_l (N x M) satisfy G = B_l Y_l Q_l for
every layer, which is what the trainer's gradient is built on.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import List, Tuple

import numpy as np

from sim_doa.core.dft import TargetOperator
from sim_doa.core.geometry import wrap_to_2pi
from sim_doa.core.propagation import DiffractionStack


@dataclass
class SimState:
    """Phase shifts xi (L x M, radians in [0, 2*pi)) over a shared diffraction stack."""

    xi: np.ndarray
    stack: DiffractionStack = field(repr=False)

    def __post_init__(self) -> None:
        xi = np.array(self.xi, dtype=float, ndmin=2)
        expected = (self.stack.num_layers, self.stack.n_atoms)
        if xi.shape != expected:
            raise ValueError(f"phase array shape {xi.shape} does not match stack {expected}")
        self.xi = wrap_to_2pi(xi)

    @property
    def num_layers(self) -> int:
        return self.xi.shape[0]

    @property
    def coefficients(self) -> np.ndarray:
        """Transmission coefficients exp(j xi), shape (L, M)."""
        return np.exp(1j * self.xi)

    def with_phases(self, xi: np.ndarray) -> "SimState":
        return SimState(xi=xi, stack=self.stack)

    def fit_residual_columns(self, target: TargetOperator, beta: complex) -> np.ndarray:
        """Per-column squared fitting error ||beta g_n - f_n||^2."""
        residual = beta * transfer_matrix(self) - target.f
        return np.sum(np.abs(residual) ** 2, axis=0)


@dataclass(frozen=True)
class InputLayerPhases:
    """Input-layer phase vector xi_0 (length N, radians in [0, 2*pi))."""

    xi0: np.ndarray

    def __post_init__(self) -> None:
        object.__setattr__(self, "xi0", wrap_to_2pi(np.asarray(self.xi0, dtype=float)))

    @property
    def coefficients(self) -> np.ndarray:
        return np.exp(1j * self.xi0)


def transfer_matrix(state: SimState) -> np.ndarray:
    stack = state.stack
    upsilon = state.coefficients
    field_ = stack.w_in
    for layer in range(state.num_layers):
        field_ = upsilon[layer][:, None] * field_
        if layer < state.num_layers - 1:
            field_ = stack.w_mid @ field_
    return stack.w_out @ field_


def cascade_partials(state: SimState) -> Tuple[np.ndarray, np.ndarray]:
    """
    Forward and backward partial products for every layer at once.

    Returns:
        (forward, backward) with forward[l] = Q_{l+1} of shape (M, N) and
        backward[l] = B_{l+1} of shape (N, M) for 0-based layer index l.
    """
    stack = state.stack
    upsilon = state.coefficients
    num_layers = state.num_layers
    m, n = stack.w_in.shape

    forward = np.empty((num_layers, m, n), dtype=complex)
    forward[0] = stack.w_in
    for layer in range(1, num_layers):
        forward[layer] = stack.w_mid @ (upsilon[layer - 1][:, None] * forward[layer - 1])

    backward = np.empty((num_layers, n, m), dtype=complex)
    backward[-1] = stack.w_out
    for layer in range(num_layers - 2, -1, -1):
        backward[layer] = (backward[layer + 1] * upsilon[layer + 1][None, :]) @ stack.w_mid

    return forward, backward


def partial_cascades(state: SimState, n: int) -> Tuple[List[np.ndarray], List[np.ndarray]]:
    """
    q_{l,n} and P_{l,n} for input element ``n`` (0-based) and every layer.

    q_{l,n} is the field illuminating layer l from input element n and
    P_{l,n} = B_l diag(q_{l,n}), so that P_{l,n} @ upsilon_l equals column n of G.
    """
    n_elements = state.stack.n_elements
    if not 0 <= n < n_elements:
        raise IndexError(f"input element {n} outside 0..{n_elements - 1}")
    forward, backward = cascade_partials(state)
    q = [forward[layer][:, n] for layer in range(state.num_layers)]
    p = [backward[layer] * q[layer][None, :] for layer in range(state.num_layers)]
    return q, p


__all__ = [
    "SimState",
    "InputLayerPhases",
    "transfer_matrix",
    "cascade_partials",
    "partial_cascades",
]
