# model_store.py
from __future__ import annotations

import io
import json
import os
from pathlib import Path
from typing import Optional, Tuple, Union

import numpy as np
from pydantic import ValidationError

from sim_doa.core.geometry import SimGeometry
from sim_doa.core.model import SimState
from sim_doa.core.propagation import DiffractionStack, build_stack
from sim_doa.errors import ModelFileError
from sim_doa.utils.logger import logger

FORMAT_TAG = "sim-doa model v1"

PathLike = Union[str, "os.PathLike[str]"]


class ModelStore:
    """
    Text model files holding a trained SIM.

    Layout:
      # sim-doa model v1
      # geometry-hash <sha256 of the geometry json>
      # geometry <geometry json>
      # beta <re> <im>
      <L rows of M phases, %.17g>
    Phases are written with 17 significant digits, so loading is exact.
    """

    def __init__(self, cache_dir: Optional[PathLike] = None):
        self.cache_dir = cache_dir if cache_dir is not None else os.getenv("SIM_DOA_CACHE_DIR")
        if self.cache_dir:
            logger.info(f"Diffraction stack cache enabled at {self.cache_dir}")

    # -------- model files --------
    def save(self, path: PathLike, state: SimState, beta: complex) -> None:
        geom = state.stack.geometry
        header = "\n".join(
            [
                FORMAT_TAG,
                f"geometry-hash {geom.geometry_hash()}",
                f"geometry {geom.model_dump_json()}",
                f"beta {beta.real!r} {beta.imag!r}",
            ]
        )
        buffer = io.StringIO()
        np.savetxt(buffer, state.xi, fmt="%.17g", header=header, comments="# ")
        Path(path).write_text(buffer.getvalue(), encoding="utf-8")
        logger.info(f"Model written to {path} (L={state.num_layers}, M={state.xi.shape[1]})")

    def load(self, path: PathLike) -> Tuple[SimState, complex]:
        try:
            text = Path(path).read_text(encoding="utf-8")
        except (OSError, UnicodeDecodeError) as e:
            raise ModelFileError(f"cannot read model file {path}: {e}") from e

        header = {}
        for line in text.splitlines():
            if not line.startswith("# "):
                continue
            key, _, value = line[2:].partition(" ")
            header[key] = value
        if f"{header.get('sim-doa', '')}".strip() != "model v1":
            raise ModelFileError(f"{path} is not a sim-doa model file")

        try:
            geom = SimGeometry.model_validate_json(header["geometry"])
            beta_re, beta_im = (float(v) for v in header["beta"].split())
            expected_hash = header["geometry-hash"].strip()
        except (KeyError, ValueError, ValidationError, json.JSONDecodeError) as e:
            raise ModelFileError(f"corrupted header in {path}: {e}") from e
        if geom.geometry_hash() != expected_hash:
            raise ModelFileError(f"geometry hash mismatch in {path}")

        try:
            xi = np.loadtxt(io.StringIO(text), comments="#", ndmin=2)
        except ValueError as e:
            raise ModelFileError(f"corrupted phase table in {path}: {e}") from e
        if xi.shape != (geom.num_layers, geom.n_atoms):
            raise ModelFileError(
                f"phase table shape {xi.shape} does not match geometry "
                f"({geom.num_layers}, {geom.n_atoms})"
            )

        logger.info(f"Model loaded from {path}")
        return SimState(xi=xi, stack=self.stack_for(geom)), complex(beta_re, beta_im)

    # -------- diffraction stack cache --------
    def stack_for(self, geom: SimGeometry) -> DiffractionStack:
        """Build the stack, reading or filling the on-disk cache when one is configured."""
        if not self.cache_dir:
            return build_stack(geom)

        cache_path = Path(self.cache_dir) / f"{geom.geometry_hash()}.npz"
        if cache_path.exists():
            try:
                with np.load(cache_path) as archive:
                    logger.debug(f"Stack cache hit: {cache_path}")
                    return DiffractionStack(
                        w_in=archive["w_in"], w_mid=archive["w_mid"], geometry=geom
                    )
            except Exception as e:
                logger.warning(f"Ignoring unreadable stack cache {cache_path}: {e}")

        stack = build_stack(geom)
        try:
            cache_path.parent.mkdir(parents=True, exist_ok=True)
            np.savez(cache_path, w_in=stack.w_in, w_mid=stack.w_mid)
            logger.debug(f"Stack cached at {cache_path}")
        except OSError as e:
            # Don't fail the run for cache write failures
            logger.error(f"Failed to write stack cache {cache_path}: {e}")
        return stack
