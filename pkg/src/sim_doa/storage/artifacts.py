"""CSV result tables with self-describing JSON sidecars."""

from __future__ import annotations

import json
from pathlib import Path
from typing import Any, Dict, Optional, Union

import pandas as pd

from sim_doa.utils.logger import logger

PathLike = Union[str, Path]


def write_table(
    frame: pd.DataFrame,
    out_dir: PathLike,
    name: str,
    sidecar: Optional[Dict[str, Any]] = None,
) -> Path:
    """
    Write ``frame`` to ``<out_dir>/<name>.csv`` and, when given, ``sidecar`` to
    ``<out_dir>/<name>.json``.

    Returns:
        Path of the CSV file.
    """
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    csv_path = out / f"{name}.csv"
    frame.to_csv(csv_path, index=False)
    logger.info(f"Wrote {len(frame)} rows to {csv_path}")

    if sidecar is not None:
        json_path = out / f"{name}.json"
        json_path.write_text(json.dumps(sidecar, indent=2, sort_keys=True) + "\n", encoding="utf-8")
        logger.debug(f"Wrote sidecar {json_path}")
    return csv_path


def read_sidecar(path: PathLike) -> Dict[str, Any]:
    return json.loads(Path(path).read_text(encoding="utf-8"))


__all__ = ["write_table", "read_sidecar"]
