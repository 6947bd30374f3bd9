"""Command-line interface for sim-doa."""

from __future__ import annotations

import argparse
import json
import math
import sys
from pathlib import Path
from typing import Any, Dict, List, Optional

from pydantic import ValidationError

from sim_doa import __version__
from sim_doa.config import load_config
from sim_doa.core.dft import target_for
from sim_doa.core.geometry import ElectricalAngles
from sim_doa.errors import ConfigError, ModelFileError
from sim_doa.estimation.estimator import estimate, mse
from sim_doa.estimation.protocol import ProtocolConfig, simulate_snapshots
from sim_doa.experiments.runner import run_experiment, write_results
from sim_doa.experiments.spec import ExperimentKind
from sim_doa.main import reproduce
from sim_doa.storage.artifacts import write_table
from sim_doa.storage.model_store import ModelStore
from sim_doa.training.trainer import train
from sim_doa.utils.logger import logger

EXIT_OK = 0
EXIT_FAILURE = 1
EXIT_USAGE = 2

MODEL_FILE = "model.txt"
REPORT_NAME = "train_report"


def cmd_train(config_path: str, output: str) -> int:
    config = load_config(config_path)
    geom = config.geometry
    store = ModelStore()
    state, report = train(geom, target_for(geom), config.train, stack=store.stack_for(geom))

    out_dir = Path(output)
    out_dir.mkdir(parents=True, exist_ok=True)
    store.save(out_dir / MODEL_FILE, state, report.final_beta)
    write_table(report.to_frame(), out_dir, REPORT_NAME)
    return EXIT_OK


def estimate_record(
    model_path: str,
    psi_x: float,
    psi_y: float,
    snr_db: float,
    t_x: int,
    t_y: int,
    seed: int,
    noiseless: bool = False,
) -> Dict[str, Any]:
    """Simulate one observation through a saved SIM and summarise the estimate."""
    state, beta = ModelStore().load(model_path)
    geom = state.stack.geometry
    cfg = ProtocolConfig(
        t_x=t_x,
        t_y=t_y,
        snr_db=snr_db,
        seed=seed,
        noiseless=noiseless,
        gain_re=beta.real,
        gain_im=beta.imag,
    )
    true_psi = ElectricalAngles.from_pi_units(psi_x, psi_y)
    found = estimate(simulate_snapshots(state, true_psi, cfg), geom)
    est_x, est_y = found.psi_hat.in_pi_units()
    physical = found.physical_hat
    return {
        "n_hat": found.n_hat,
        "t_hat": found.t_hat,
        "psi_x": est_x,
        "psi_y": est_y,
        "azimuth": physical.azimuth if physical is not None else None,
        "elevation": physical.elevation if physical is not None else None,
        "mse": mse(true_psi, found.psi_hat),
    }


def cmd_estimate(args: argparse.Namespace) -> int:
    record = estimate_record(
        args.model,
        args.psi_x,
        args.psi_y,
        args.snr_db,
        args.tx,
        args.ty,
        args.seed,
        noiseless=args.noiseless,
    )
    print(json.dumps(record, sort_keys=True))
    return EXIT_OK


def cmd_experiment(config_path: str, kind: str, output: str) -> int:
    spec = load_config(config_path).experiment_spec(kind)
    result = run_experiment(spec)
    for path in write_results(result, spec, output):
        logger.info(f"Result table: {path}")
    return EXIT_OK


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="sim-doa",
        description="sim-doa - stacked intelligent metasurface 2D DOA estimation",
    )

    subparsers = parser.add_subparsers(
        dest="command",
        help="Available commands"
    )

    # Train command
    train_parser = subparsers.add_parser(
        "train",
        help="Fit a SIM to the 2D DFT and write the model file and training report"
    )
    train_parser.add_argument("config", help="JSON run config, or 'default'")
    train_parser.add_argument("output", help="Output directory")

    # Estimate command
    estimate_parser = subparsers.add_parser(
        "estimate",
        help="Estimate the DOA of one simulated source with a trained model"
    )
    estimate_parser.add_argument("model", help="Model file written by 'train'")
    estimate_parser.add_argument("--psi-x", type=float, required=True, help="True psi_x in units of pi")
    estimate_parser.add_argument("--psi-y", type=float, required=True, help="True psi_y in units of pi")
    estimate_parser.add_argument("--snr-db", type=float, default=10.0, help="SNR in dB (default: 10)")
    estimate_parser.add_argument("--tx", type=int, default=100, help="Snapshots per block (default: 100)")
    estimate_parser.add_argument("--ty", type=int, default=100, help="Number of blocks (default: 100)")
    estimate_parser.add_argument("--seed", type=int, default=0, help="Source and noise seed (default: 0)")
    estimate_parser.add_argument("--noiseless", action="store_true", help="Drop the receiver noise")

    # Experiment command
    experiment_parser = subparsers.add_parser(
        "experiment",
        help="Run one experiment and write CSV tables with JSON sidecars"
    )
    experiment_parser.add_argument("config", help="JSON run config, or 'default'")
    experiment_parser.add_argument("kind", choices=[k.value for k in ExperimentKind])
    experiment_parser.add_argument("output", help="Output directory")

    # Reproduce command
    reproduce_parser = subparsers.add_parser(
        "reproduce",
        help="Run all four experiments with one shared trained SIM"
    )
    reproduce_parser.add_argument("config", nargs="?", default="default", help="JSON run config (default: built-in)")
    reproduce_parser.add_argument("--output", default="results", help="Output directory (default: results)")

    # Version command
    subparsers.add_parser(
        "version",
        help="Show version information"
    )
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    """
    Run the sim-doa CLI.

    Args:
        argv: Command-line arguments. If None, uses sys.argv.

    Returns:
        Exit code (0 for success, 1 for runtime failure, 2 for usage or config errors).
    """
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_OK if e.code in (0, None) else EXIT_USAGE

    try:
        if args.command == "train":
            return cmd_train(args.config, args.output)

        elif args.command == "estimate":
            if not (math.isfinite(args.psi_x) and math.isfinite(args.psi_y)):
                logger.error("--psi-x and --psi-y must be finite")
                return EXIT_USAGE
            return cmd_estimate(args)

        elif args.command == "experiment":
            return cmd_experiment(args.config, args.kind, args.output)

        elif args.command == "reproduce":
            reproduce(args.config, args.output)
            return EXIT_OK

        elif args.command == "version":
            print(f"sim-doa version {__version__}")
            return EXIT_OK

        else:
            parser.print_help()
            return EXIT_FAILURE

    except (ConfigError, ModelFileError, ValidationError, FileNotFoundError) as e:
        logger.error(f"{args.command}: {e}")
        return EXIT_USAGE
    except Exception as e:
        logger.exception(f"{args.command} failed: {e}")
        return EXIT_FAILURE


if __name__ == "__main__":
    sys.exit(main())
