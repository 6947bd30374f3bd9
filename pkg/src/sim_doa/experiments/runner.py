"""
End-to-end experiment runners.

Every runner is a pure function of its ExperimentSpec: training seeds come
from ``spec.train.seed`` and Monte Carlo draws from ``spec.master_seed``, so a
re-run reproduces every table exactly.
"""

from __future__ import annotations

import math
import multiprocessing
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Callable, Dict, Iterable, List, Optional, Tuple, TypeVar, Union

import numpy as np
import pandas as pd

from sim_doa import __version__
from sim_doa.core.dft import target_for
from sim_doa.core.geometry import ElectricalAngles
from sim_doa.core.model import SimState, transfer_matrix
from sim_doa.core.propagation import build_stack
from sim_doa.estimation.estimator import (
    electrical_from_peak,
    estimate,
    laminated_spectrum,
    mse,
    nearest_grid_point,
    peak_search,
)
from sim_doa.estimation.protocol import (
    ProtocolConfig,
    SourceModel,
    digital_baseline_grid,
    simulate_snapshots,
)
from sim_doa.experiments.spec import ExperimentKind, ExperimentSpec
from sim_doa.storage.artifacts import write_table
from sim_doa.training.trainer import initial_state, train, train_state
from sim_doa.utils.logger import get_logger
from sim_doa.utils.workers import resolve_workers

logger = get_logger("sim-doa.experiments")

T = TypeVar("T")
R = TypeVar("R")

Trained = Tuple[SimState, complex]


@dataclass
class ExperimentResult:
    """Named result tables of one experiment run."""

    kind: ExperimentKind
    tables: Dict[str, pd.DataFrame] = field(default_factory=dict)


def _fan_out(fn: Callable[[T], R], tasks: Iterable[T], workers: int) -> List[R]:
    """Order-preserving map, in a spawn-context process pool when workers > 1."""
    tasks = list(tasks)
    if workers <= 1 or len(tasks) <= 1:
        return [fn(task) for task in tasks]
    ctx = multiprocessing.get_context("spawn")
    with ctx.Pool(processes=workers) as pool:
        return pool.map(fn, tasks)


def train_reference(spec: ExperimentSpec) -> Trained:
    """Train the SIM described by ``spec`` and return it with its scaling factor."""
    state, report = train(spec.geometry, target_for(spec.geometry), spec.train)
    return state, report.final_beta


# ---------- convergence ----------
def run_convergence(spec: ExperimentSpec) -> ExperimentResult:
    geom = spec.geometry
    target = target_for(geom)
    stack = build_stack(geom)
    start = initial_state(stack, spec.train.seed)

    frames = []
    for zeta in spec.experiment.zeta_values:
        logger.info(f"Convergence run: decay={zeta}")
        cfg = spec.train.model_copy(update={"decay": zeta, "refine_iters": 0})
        _, report = train_state(start, target, cfg)
        frame = report.to_frame()[["iteration", "loss", "normalized_loss"]]
        frame.insert(0, "zeta", zeta)
        frames.append(frame)
    return ExperimentResult(kind=spec.kind, tables={"convergence": pd.concat(frames, ignore_index=True)})


# ---------- layer / size sweep ----------
def run_layer_sweep(spec: ExperimentSpec) -> ExperimentResult:
    schedule = spec.train.model_copy(update={"refine_iters": 0})
    rows = []
    for m in spec.experiment.atom_values:
        side = math.isqrt(m)
        for num_layers in spec.experiment.layer_values:
            geom = spec.geometry.model_copy(update={"m_x": side, "m_y": side, "num_layers": num_layers})
            _, report = train(geom, target_for(geom), schedule)
            logger.info(f"Layer sweep M={m}, L={num_layers}: {report.final_normalized_loss:.4e}")
            rows.append(
                {
                    "m": m,
                    "num_layers": num_layers,
                    "normalized_loss": report.final_normalized_loss,
                    "iterations": report.iterations_run,
                    "converged": report.converged,
                }
            )
    return ExperimentResult(kind=spec.kind, tables={"layer_sweep": pd.DataFrame(rows)})


# ---------- MSE versus SNR ----------
@dataclass(frozen=True)
class _TrialTask:
    state: SimState
    response: np.ndarray
    beta: complex
    t: int
    snr_values: Tuple[float, ...]
    seed_sequence: np.random.SeedSequence
    template: ProtocolConfig


def trial_draws(seed_sequence: np.random.SeedSequence) -> Tuple[ElectricalAngles, int]:
    """True angles uniform on [-1, 1)^2 (pi units) and the noise seed of one trial."""
    rng = np.random.default_rng(seed_sequence)
    psi_x, psi_y = rng.uniform(-1.0, 1.0, size=2)
    noise_seed = int(rng.integers(0, 2**63 - 1))
    return ElectricalAngles.from_pi_units(psi_x, psi_y), noise_seed


def _run_trial(task: _TrialTask) -> List[Tuple[float, float, float]]:
    geom = task.state.stack.geometry
    psi, noise_seed = trial_draws(task.seed_sequence)
    out = []
    for snr_db in task.snr_values:
        cfg = task.template.model_copy(
            update={
                "t_x": task.t,
                "t_y": task.t,
                "snr_db": snr_db,
                "seed": noise_seed,
                "gain_re": task.beta.real,
                "gain_im": task.beta.imag,
            }
        )
        sim_est = estimate(simulate_snapshots(task.state, psi, cfg, response=task.response), geom)
        digital_est = estimate(digital_baseline_grid(geom, psi, cfg), geom)
        out.append((snr_db, mse(psi, sim_est.psi_hat), mse(psi, digital_est.psi_hat)))
    return out


def run_mse_vs_snr(spec: ExperimentSpec, trained: Optional[Trained] = None) -> ExperimentResult:
    state, beta = trained if trained is not None else train_reference(spec)
    response = transfer_matrix(state)
    settings = spec.experiment
    workers = resolve_workers(settings.workers)
    # one child sequence per trial, shared by every T setup, SNR and method
    children = np.random.SeedSequence(spec.master_seed).spawn(settings.trials)

    rows = []
    for t in settings.t_values:
        logger.info(f"MSE vs SNR: T_x = T_y = {t}, {settings.trials} trials, {workers} worker(s)")
        tasks = [
            _TrialTask(state, response, beta, t, tuple(settings.snr_values), child, spec.protocol)
            for child in children
        ]
        results = np.array(_fan_out(_run_trial, tasks, workers))  # (trials, snr, 3)
        for j, snr_db in enumerate(settings.snr_values):
            for method, column in (("sim", 1), ("digital", 2)):
                rows.append(
                    {
                        "t_x": t,
                        "t_y": t,
                        "snr_db": snr_db,
                        "method": method,
                        "mse": float(np.mean(results[:, j, column])),
                        "trials": settings.trials,
                    }
                )
    return ExperimentResult(kind=spec.kind, tables={"mse_vs_snr": pd.DataFrame(rows)})


# ---------- spatial spectrum ----------
def run_spectrum(
    spec: ExperimentSpec,
    psi_list: Optional[List[Tuple[float, float]]] = None,
    trained: Optional[Trained] = None,
) -> ExperimentResult:
    state, beta = trained if trained is not None else train_reference(spec)
    geom = spec.geometry
    cases = psi_list if psi_list is not None else spec.experiment.psi_cases
    t = spec.experiment.spectrum_t
    cfg = spec.protocol.model_copy(
        update={
            "t_x": t,
            "t_y": t,
            "snr_db": 0.0,
            "noiseless": True,
            "noise_only": False,
            "source": SourceModel.UNIT,
            "gain_re": beta.real,
            "gain_im": beta.imag,
        }
    )

    summary, maps = [], []
    grids: Dict[str, pd.DataFrame] = {}
    for case, (psi_x, psi_y) in enumerate(cases):
        psi = ElectricalAngles.from_pi_units(psi_x, psi_y)
        grid = simulate_snapshots(state, psi, cfg)
        grids[f"spectrum_grid_{case}"] = grid.to_frame()
        found = estimate(grid, geom)
        nearest = nearest_grid_point(geom, cfg, psi)
        nearest_psi = electrical_from_peak(geom, cfg, *nearest)
        digital_peak = peak_search(digital_baseline_grid(geom, psi, cfg))
        matches = (found.n_hat, found.t_hat) == nearest
        if not matches:
            residuals = state.fit_residual_columns(target_for(geom), beta)
            worst = np.argsort(residuals)[::-1][:3]
            logger.warning(
                f"Spectrum case {case}: peak {(found.n_hat, found.t_hat)} != nearest {nearest}; "
                f"largest fitting residual columns {worst.tolist()}"
            )

        est_x, est_y = found.psi_hat.in_pi_units()
        near_x, near_y = nearest_psi.in_pi_units()
        summary.append(
            {
                "case": case,
                "psi_x": psi_x,
                "psi_y": psi_y,
                "n_hat": found.n_hat,
                "t_hat": found.t_hat,
                "est_psi_x": est_x,
                "est_psi_y": est_y,
                "nearest_psi_x": near_x,
                "nearest_psi_y": near_y,
                "matches_nearest": matches,
                "digital_matches_nearest": digital_peak == nearest,
            }
        )

        axis_x, axis_y, image = laminated_spectrum(grid, geom)
        grid_x, grid_y = np.meshgrid(axis_x, axis_y)
        maps.append(
            pd.DataFrame(
                {
                    "case": case,
                    "psi_x": grid_x.ravel(),
                    "psi_y": grid_y.ravel(),
                    "energy": image.ravel(),
                }
            )
        )

    return ExperimentResult(
        kind=spec.kind,
        tables={
            "spectrum_peaks": pd.DataFrame(summary),
            "spectrum_maps": pd.concat(maps, ignore_index=True),
            **grids,
        },
    )


_RUNNERS: Dict[ExperimentKind, Callable[..., ExperimentResult]] = {
    ExperimentKind.CONVERGENCE: run_convergence,
    ExperimentKind.LAYER_SWEEP: run_layer_sweep,
    ExperimentKind.MSE_VS_SNR: run_mse_vs_snr,
    ExperimentKind.SPECTRUM: run_spectrum,
}


def run_experiment(spec: ExperimentSpec, **kwargs: Any) -> ExperimentResult:
    logger.info(f"Running experiment '{spec.kind.value}' with master seed {spec.master_seed}")
    return _RUNNERS[spec.kind](spec, **kwargs)


def sidecar_for(spec: ExperimentSpec) -> Dict[str, Any]:
    return {
        "kind": spec.kind.value,
        "master_seed": spec.master_seed,
        "spec": spec.model_dump(mode="json"),
        "version": __version__,
    }


def write_results(result: ExperimentResult, spec: ExperimentSpec, out_dir: Union[str, Path]) -> List[Path]:
    sidecar = sidecar_for(spec)
    return [write_table(frame, out_dir, name, sidecar) for name, frame in result.tables.items()]


__all__ = [
    "ExperimentResult",
    "train_reference",
    "trial_draws",
    "run_convergence",
    "run_layer_sweep",
    "run_mse_vs_snr",
    "run_spectrum",
    "run_experiment",
    "sidecar_for",
    "write_results",
]
