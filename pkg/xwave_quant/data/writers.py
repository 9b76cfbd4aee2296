"""CSV and JSON result files with a provenance header."""

import json
import logging
import math
from pathlib import Path
from typing import Any, Dict, Optional

import numpy as np
import pandas as pd

from .. import __version__
from ..models.field import FieldEnvelope
from ..settings import get_settings

logger = logging.getLogger("xwave_quant.data.writers")


def provenance_header(config_hash: str) -> str:
    return f"# xwave_quant {__version__} config_hash={config_hash}\n"


def write_csv(path: Path, frame: pd.DataFrame, config_hash: str, float_format: Optional[str] = None) -> Path:
    """Write a frame as CSV below a single '#' provenance line."""
    float_format = float_format or get_settings().float_format
    path = Path(path)
    with path.open("w", newline="") as handle:
        handle.write(provenance_header(config_hash))
        frame.to_csv(handle, index=False, float_format=float_format, lineterminator="\n")
    logger.info("Wrote %s (%d rows)", path, len(frame))
    return path


def field_frame(field: FieldEnvelope) -> pd.DataFrame:
    """Columns r, zeta, re, im with zeta varying fastest."""
    r, zeta = np.meshgrid(field.r_grid, field.zeta_grid, indexing="ij")
    return pd.DataFrame({
        "r": r.ravel(),
        "zeta": zeta.ravel(),
        "re": field.values.real.ravel(),
        "im": field.values.imag.ravel(),
    })


def _json_safe(value: Any) -> Any:
    if isinstance(value, dict):
        return {key: _json_safe(item) for key, item in value.items()}
    if isinstance(value, (list, tuple)):
        return [_json_safe(item) for item in value]
    if isinstance(value, (float, np.floating)):
        value = float(value)
        return value if math.isfinite(value) else None
    if isinstance(value, np.integer):
        return int(value)
    return value


def write_summary(path: Path, summary: Dict[str, Any]) -> Path:
    """Write a JSON summary; non-finite numbers become null."""
    path = Path(path)
    path.write_text(json.dumps(_json_safe(summary), sort_keys=True, indent=2) + "\n")
    logger.info("Wrote %s", path)
    return path
