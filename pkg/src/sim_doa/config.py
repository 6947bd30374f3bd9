"""
Run configuration for sim-doa.

A run is described by one JSON document with the blocks ``geometry``,
``train``, ``protocol`` and ``experiment`` plus a ``master_seed``. Every key is
optional and defaults to the reference 60 GHz setup; unknown keys are
rejected. Result sidecars written by the experiment runners are accepted as
config files too, so any result can be re-run from its own sidecar.
"""

from __future__ import annotations

import json
import os
from pathlib import Path
from typing import Any, Dict, Union

from pydantic import BaseModel, ConfigDict, Field, ValidationError

from sim_doa.core.geometry import SimGeometry
from sim_doa.errors import ConfigError
from sim_doa.estimation.protocol import ProtocolConfig
from sim_doa.experiments.spec import ExperimentKind, ExperimentSettings, ExperimentSpec
from sim_doa.training.trainer import TrainConfig
from sim_doa.utils.logger import logger

DEFAULT_CONFIG = "default"


class RunConfig(BaseModel):
    model_config = ConfigDict(frozen=True, extra="forbid")

    geometry: SimGeometry = Field(default_factory=SimGeometry, description="Physical layout")
    train: TrainConfig = Field(default_factory=TrainConfig, description="Gradient-descent settings")
    protocol: ProtocolConfig = Field(default_factory=ProtocolConfig, description="Observation settings")
    experiment: ExperimentSettings = Field(
        default_factory=ExperimentSettings, description="Sweep lists and Monte Carlo sizes"
    )
    master_seed: int = Field(default=0, ge=0, description="Seed for Monte Carlo draws")

    def experiment_spec(self, kind: Union[ExperimentKind, str]) -> ExperimentSpec:
        """Bind this configuration to one experiment kind."""
        try:
            return ExperimentSpec(kind=ExperimentKind(kind), **dict(self))
        except ValueError as e:
            raise ConfigError(f"cannot run {kind!r} with this configuration: {e}") from e


def _from_document(document: Dict[str, Any]) -> Dict[str, Any]:
    # result sidecars nest the experiment spec (with its kind) under "spec"
    if "spec" in document and isinstance(document["spec"], dict):
        body = dict(document["spec"])
        body.pop("kind", None)
        return body
    return document


def load_config(path: Union[str, "os.PathLike[str]"]) -> RunConfig:
    """
    Load and validate a run configuration.

    Args:
        path: JSON file, or the literal ``"default"`` for the built-in setup.

    Raises:
        ConfigError: The file is missing, is not JSON or fails validation.
    """
    if str(path) == DEFAULT_CONFIG:
        logger.info("Using built-in default configuration")
        return RunConfig()

    config_path = Path(path)
    try:
        document = json.loads(config_path.read_text(encoding="utf-8"))
    except FileNotFoundError as e:
        raise ConfigError(f"config file not found: {config_path}") from e
    except (OSError, UnicodeDecodeError, json.JSONDecodeError) as e:
        raise ConfigError(f"cannot read config {config_path}: {e}") from e
    if not isinstance(document, dict):
        raise ConfigError(f"config {config_path} must hold a JSON object")

    try:
        config = RunConfig.model_validate(_from_document(document))
    except ValidationError as e:
        raise ConfigError(f"invalid config {config_path}: {e}") from e
    logger.info(f"Loaded configuration from {config_path}")
    return config


__all__ = ["RunConfig", "load_config", "DEFAULT_CONFIG"]
