"""
CSV and JSON writers for every command output.

CSV numbers are written at 17 significant digits so generated datasets read back
bit-exactly. JSON payloads carry a top-level "schema" version.
"""
import json
import logging
from datetime import datetime
from enum import Enum
from pathlib import Path
from typing import Any, Optional

import numpy as np
import pandas as pd

from ..config.settings import FLOAT_FORMAT, JSON_SCHEMA_VERSION, OUTPUT_DIR
from ..models.experiment import RunConfig
from ..models.time_series import TimeSeries

logger = logging.getLogger(__name__)


def to_jsonable(value: Any) -> Any:
    """Recursively convert numpy, Path, Enum and datetime values to JSON types."""
    if isinstance(value, dict):
        return {str(k): to_jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [to_jsonable(v) for v in value]
    if isinstance(value, np.ndarray):
        return to_jsonable(value.tolist())
    if isinstance(value, np.integer):
        return int(value)
    if isinstance(value, np.floating):
        return float(value)
    if isinstance(value, np.bool_):
        return bool(value)
    if isinstance(value, float) and not np.isfinite(value):
        return None
    if isinstance(value, (Path, datetime)):
        return str(value)
    if isinstance(value, Enum):
        return value.value
    return value


class ResultExporter:
    """Write command results into one output directory."""

    def __init__(self, out_dir: Optional[Path] = None):
        """
        Args:
            out_dir: Output directory (default: settings.OUTPUT_DIR), created on demand
        """
        self.out_dir = Path(out_dir) if out_dir is not None else OUTPUT_DIR
        self.out_dir.mkdir(parents=True, exist_ok=True)

    def path(self, name: str) -> Path:
        return self.out_dir / name

    def write_json(self, name: str, payload: dict) -> Path:
        """Write a payload with the schema version as first key."""
        path = self.path(name)
        document = {'schema': JSON_SCHEMA_VERSION, **to_jsonable(payload)}
        path.write_text(json.dumps(document, indent=2), encoding='utf-8')
        logger.debug(f"Wrote {path}")
        return path

    def write_frame(self, name: str, frame: pd.DataFrame) -> Path:
        path = self.path(name)
        frame.to_csv(path, index=False, float_format=FLOAT_FORMAT)
        logger.debug(f"Wrote {len(frame)} rows to {path}")
        return path

    def write_series(self, name: str, ts: TimeSeries, include_labels: bool = True) -> Path:
        """
        Write a series one sample per row with columns x0..x{D-1}.

        Labels, when present and requested, go in a final 'label' column.
        """
        frame = pd.DataFrame(ts.data.T, columns=[f"x{i}" for i in range(ts.dim)])
        if include_labels and ts.labels is not None:
            frame['label'] = ts.labels
        return self.write_frame(name, frame)

    def write_matrix(self, name: str, matrix: np.ndarray) -> Path:
        """Write a matrix row by row without a header."""
        path = self.path(name)
        pd.DataFrame(np.atleast_2d(matrix)).to_csv(path, index=False, header=False,
                                                   float_format=FLOAT_FORMAT)
        return path

    def write_run_config(self, run_config: RunConfig) -> Path:
        return self.write_json('run_config.json', run_config.to_dict())
