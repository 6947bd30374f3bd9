"""
Gradient-descent fitting of the SIM response to the 2D DFT target.

Each iteration evaluates G, refreshes the least-squares scaling factor beta,
takes the analytic gradient with beta held fixed and moves every phase by
-eta * grad, where eta makes the largest single phase move equal to
pi * decay**k at iteration k.

Once the schedule has run out, an optional refinement stage keeps descending
along the same gradient with Barzilai-Borwein step lengths, backtracking until
the loss drops (Armijo), so every accepted refinement step lowers the loss.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import List, Optional, Tuple

import numpy as np
import pandas as pd
from pydantic import BaseModel, ConfigDict, Field

from sim_doa.core.dft import TargetOperator
from sim_doa.core.geometry import SimGeometry
from sim_doa.core.model import SimState, cascade_partials, transfer_matrix
from sim_doa.core.propagation import DiffractionStack, build_stack
from sim_doa.errors import DegenerateResponseError
from sim_doa.utils.logger import get_logger

logger = get_logger("sim-doa.trainer")


class TrainConfig(BaseModel):
    """Gradient-descent settings."""

    model_config = ConfigDict(frozen=True, extra="forbid")

    max_iters: int = Field(default=200, ge=1, description="Phase updates on the decayed schedule")
    decay: float = Field(default=0.95, gt=0, lt=1, description="Step-size decay zeta")
    seed: int = Field(default=0, ge=0, description="Seed for the uniform phase initialisation")
    convergence_tol: float = Field(default=1e-6, ge=0, description="Relative loss change declaring convergence")
    convergence_window: int = Field(default=10, ge=1, description="Iterations spanned by the convergence test")
    log_every: int = Field(default=20, ge=1, description="Progress log interval (iterations)")
    refine_iters: int = Field(
        default=2000,
        ge=0,
        description="Extra monotone descent iterations after the decayed schedule; 0 disables them",
    )


@dataclass
class TrainReport:
    """Per-iteration history; entry k describes the state after k updates."""

    loss_history: List[float] = field(default_factory=list)
    normalized_loss_history: List[float] = field(default_factory=list)
    eta_history: List[float] = field(default_factory=list)
    beta_history: List[complex] = field(default_factory=list)
    final_beta: complex = 0j
    iterations_run: int = 0
    scheduled_updates: int = 0
    converged: bool = False

    @property
    def final_loss(self) -> float:
        return self.loss_history[-1]

    @property
    def final_normalized_loss(self) -> float:
        return self.normalized_loss_history[-1]

    def to_frame(self) -> pd.DataFrame:
        """Columns: iteration, loss, normalized_loss, eta, beta_re, beta_im."""
        betas = np.asarray(self.beta_history, dtype=complex)
        return pd.DataFrame(
            {
                "iteration": np.arange(len(self.loss_history)),
                "loss": self.loss_history,
                "normalized_loss": self.normalized_loss_history,
                "eta": self.eta_history,
                "beta_re": betas.real,
                "beta_im": betas.imag,
            }
        )


def loss(g: np.ndarray, target: TargetOperator, beta: complex) -> float:
    """||beta G - F||_F^2."""
    if g.shape != target.f.shape:
        raise ValueError(f"response shape {g.shape} does not match target {target.f.shape}")
    return float(np.sum(np.abs(beta * g - target.f) ** 2))


def ls_beta(g: np.ndarray, target: TargetOperator) -> complex:
    """Least-squares scaling factor (g^H g)^-1 g^H f over the vectorised matrices."""
    if g.shape != target.f.shape:
        raise ValueError(f"response shape {g.shape} does not match target {target.f.shape}")
    energy = np.vdot(g, g).real
    if energy == 0.0:
        raise DegenerateResponseError("SIM response is identically zero")
    return complex(np.vdot(g, target.f) / energy)


def _response_from_partials(forward: np.ndarray, backward: np.ndarray, upsilon: np.ndarray) -> np.ndarray:
    return (backward[-1] * upsilon[-1][None, :]) @ forward[-1]


def _gradient_from_partials(
    forward: np.ndarray,
    backward: np.ndarray,
    upsilon: np.ndarray,
    residual: np.ndarray,
    beta: complex,
) -> np.ndarray:
    # sum_n conj(q_{l,n}) * (B_l^H r_n), for every layer at once
    back_residual = np.conj(np.transpose(backward, (0, 2, 1))) @ residual
    weighted = np.sum(np.conj(forward) * back_residual, axis=2)
    return 2.0 * np.imag(np.conj(beta) * np.conj(upsilon) * weighted)


def gradient(state: SimState, target: TargetOperator, beta: complex) -> np.ndarray:
    """
    Analytic gradient of the loss with respect to every phase, beta fixed.

    Returns:
        Array of shape (L, M); row l is the gradient for layer l + 1.
    """
    forward, backward = cascade_partials(state)
    upsilon = state.coefficients
    residual = beta * _response_from_partials(forward, backward, upsilon) - target.f
    return _gradient_from_partials(forward, backward, upsilon, residual, beta)


def initial_state(stack: DiffractionStack, seed: int) -> SimState:
    rng = np.random.default_rng(seed)
    xi = rng.uniform(0.0, 2.0 * math.pi, size=(stack.num_layers, stack.n_atoms))
    return SimState(xi=xi, stack=stack)


def _has_converged(history: List[float], cfg: TrainConfig) -> bool:
    if len(history) <= cfg.convergence_window:
        return False
    previous = history[-1 - cfg.convergence_window]
    if previous == 0.0:
        return True
    return abs(history[-1] - previous) / previous < cfg.convergence_tol


def _evaluate(xi: np.ndarray, state: SimState, target: TargetOperator) -> Tuple[SimState, float, complex]:
    candidate = state.with_phases(xi)
    g = transfer_matrix(candidate)
    beta = ls_beta(g, target)
    return candidate, float(np.sum(np.abs(beta * g - target.f) ** 2)), beta


def _refine(
    state: SimState, target: TargetOperator, cfg: TrainConfig, report: TrainReport
) -> SimState:
    """Monotone descent from ``state``; appends to ``report`` in place."""
    normalizer = target.energy
    value = report.loss_history[-1]
    # unwrapped copy, the step-length secant needs continuous phases
    xi = state.xi.copy()
    previous: Optional[Tuple[np.ndarray, np.ndarray]] = None
    step = 0.0
    report.converged = False
    start = len(report.loss_history) - 1

    for j in range(cfg.refine_iters):
        beta = report.final_beta
        grad = gradient(state, target, beta)
        peak = float(np.max(np.abs(grad)))
        if peak == 0.0:
            report.converged = True
            break

        if previous is None:
            step = math.pi * cfg.decay**report.iterations_run / peak
        else:
            s = xi - previous[0]
            y = grad - previous[1]
            curvature = float(np.sum(s * y))
            if curvature > 0.0:
                step = float(np.sum(s * s)) / curvature
        step = min(step, math.pi / peak)

        slope = float(np.sum(grad * grad))
        accepted = False
        while step * peak >= 1e-12:
            candidate_xi = xi - step * grad
            candidate, candidate_value, candidate_beta = _evaluate(candidate_xi, state, target)
            if candidate_value <= value - 1e-4 * step * slope:
                accepted = True
                break
            step *= 0.5
        if not accepted:
            report.converged = True
            logger.info(f"Refinement stalled after {j} steps")
            break

        report.eta_history.append(step)
        previous = (xi, grad)
        xi, state, value = candidate_xi, candidate, candidate_value
        report.loss_history.append(value)
        report.normalized_loss_history.append(value / normalizer)
        report.beta_history.append(candidate_beta)
        report.final_beta = candidate_beta
        report.iterations_run += 1

        if report.iterations_run % cfg.log_every == 0:
            logger.info(
                f"iteration {report.iterations_run}: normalized loss {value / normalizer:.6e} (refining)"
            )
        if _has_converged(report.loss_history[start:], cfg):
            report.converged = True
            logger.info(f"Refinement converged after {j + 1} steps")
            break

    return state


def train_state(
    state: SimState, target: TargetOperator, cfg: TrainConfig
) -> Tuple[SimState, TrainReport]:
    """Run the decayed schedule, then the refinement stage, from an explicit starting state."""
    report = TrainReport()
    normalizer = target.energy

    for k in range(cfg.max_iters + 1):
        forward, backward = cascade_partials(state)
        upsilon = state.coefficients
        g = _response_from_partials(forward, backward, upsilon)
        beta = ls_beta(g, target)
        residual = beta * g - target.f
        value = float(np.sum(np.abs(residual) ** 2))

        report.loss_history.append(value)
        report.normalized_loss_history.append(value / normalizer)
        report.beta_history.append(beta)
        report.final_beta = beta

        if k % cfg.log_every == 0:
            logger.info(f"iteration {k}: normalized loss {value / normalizer:.6e}")

        if _has_converged(report.loss_history, cfg):
            report.converged = True
            logger.info(f"Converged after {k} updates")
            break
        if k == cfg.max_iters:
            break

        grad = _gradient_from_partials(forward, backward, upsilon, residual, beta)
        peak = float(np.max(np.abs(grad)))
        if peak == 0.0:
            report.converged = True
            logger.info(f"Zero gradient after {k} updates")
            break

        eta = math.pi * cfg.decay**k / peak
        report.eta_history.append(eta)
        logger.debug(f"iteration {k}: eta={eta:.3e}, max|grad|={peak:.3e}, beta={beta:.3e}")
        state = state.with_phases(state.xi - eta * grad)
        report.iterations_run += 1

    report.scheduled_updates = report.iterations_run
    if cfg.refine_iters > 0:
        state = _refine(state, target, cfg, report)

    # the final recorded state has no outgoing step
    report.eta_history.append(float("nan"))
    return state, report


def train(
    geom: SimGeometry,
    target: TargetOperator,
    cfg: TrainConfig,
    stack: Optional[DiffractionStack] = None,
) -> Tuple[SimState, TrainReport]:
    """Initialise phases uniformly from ``cfg.seed`` and fit the SIM to ``target``."""
    if stack is None:
        stack = build_stack(geom)
    logger.info(
        f"Training SIM: L={geom.num_layers}, M={geom.n_atoms}, N={geom.n_elements}, "
        f"decay={cfg.decay}, max_iters={cfg.max_iters}, refine_iters={cfg.refine_iters}, seed={cfg.seed}"
    )
    state, report = train_state(initial_state(stack, cfg.seed), target, cfg)
    logger.info(
        f"Training finished: {report.iterations_run} updates, "
        f"normalized loss {report.final_normalized_loss:.6e}, converged={report.converged}"
    )
    return state, report


__all__ = [
    "TrainConfig",
    "TrainReport",
    "loss",
    "ls_beta",
    "gradient",
    "initial_state",
    "train_state",
    "train",
]
