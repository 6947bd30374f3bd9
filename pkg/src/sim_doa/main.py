"""
Main entry point for a full sim-doa reproduction.

This module trains the reference SIM once and runs all four experiments
against it, writing every result table into one output directory.
"""

from __future__ import annotations

import multiprocessing
import os
import sys
from pathlib import Path
from typing import Dict, List, Union

from sim_doa.config import DEFAULT_CONFIG, load_config
from sim_doa.experiments.runner import (
    run_convergence,
    run_layer_sweep,
    run_mse_vs_snr,
    run_spectrum,
    train_reference,
    write_results,
)
from sim_doa.experiments.spec import ExperimentKind
from sim_doa.storage.model_store import ModelStore
from sim_doa.utils.logger import logger

CONFIG_ENV = "SIM_DOA_CONFIG"
OUTPUT_ENV = "SIM_DOA_OUTPUT_DIR"


def reproduce(config_path: str, output: Union[str, Path]) -> Dict[ExperimentKind, List[Path]]:
    """
    Run convergence, layer sweep, MSE versus SNR and spatial spectrum.

    The MSE and spectrum experiments share one trained SIM, which is also
    written to ``<output>/model.txt``.

    Returns:
        CSV paths written per experiment kind.
    """
    config = load_config(config_path)
    out_dir = Path(output)
    written: Dict[ExperimentKind, List[Path]] = {}

    logger.info(f"Starting full reproduction into {out_dir}")

    spec = config.experiment_spec(ExperimentKind.CONVERGENCE)
    written[spec.kind] = write_results(run_convergence(spec), spec, out_dir)

    spec = config.experiment_spec(ExperimentKind.LAYER_SWEEP)
    written[spec.kind] = write_results(run_layer_sweep(spec), spec, out_dir)

    spec = config.experiment_spec(ExperimentKind.MSE_VS_SNR)
    trained = train_reference(spec)
    out_dir.mkdir(parents=True, exist_ok=True)
    ModelStore().save(out_dir / "model.txt", *trained)
    written[spec.kind] = write_results(run_mse_vs_snr(spec, trained=trained), spec, out_dir)

    spec = config.experiment_spec(ExperimentKind.SPECTRUM)
    written[spec.kind] = write_results(run_spectrum(spec, trained=trained), spec, out_dir)

    logger.info("Reproduction complete")
    return written


def run() -> None:
    """
    Entry point for ``sim-doa-reproduce``.

    Reads the config path from ``SIM_DOA_CONFIG`` (default: built-in) and the
    output directory from ``SIM_DOA_OUTPUT_DIR`` (default: ``results``).
    """
    config_path = os.getenv(CONFIG_ENV, DEFAULT_CONFIG)
    output = os.getenv(OUTPUT_ENV, "results")

    try:
        reproduce(config_path, output)
    except KeyboardInterrupt:
        logger.info("Interrupted, partial results are kept")
        sys.exit(130)
    except Exception as e:
        logger.error(f"Error in reproduction: {e}")
        sys.exit(1)


if __name__ == "__main__":
    multiprocessing.set_start_method("spawn", force=True)
    run()
