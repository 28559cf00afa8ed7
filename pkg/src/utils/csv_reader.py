"""CSV ingestion for sample matrices."""
import logging
from pathlib import Path
from typing import Union

import numpy as np
import pandas as pd

from ..exceptions import InvalidArgument
from ..models.time_series import TimeSeries

logger = logging.getLogger(__name__)


def detect_header(path: Union[str, Path]) -> bool:
    """
    Decide whether the first row of a CSV file is a header.

    A first row containing any non-numeric cell is treated as a header.

    Args:
        path: CSV file path

    Returns:
        True if the first row should be skipped as column names
    """
    try:
        first = pd.read_csv(path, header=None, nrows=1, dtype=str)
    except pd.errors.EmptyDataError:
        raise InvalidArgument(f"{path} is empty")
    if first.empty:
        raise InvalidArgument(f"{path} is empty")
    numeric = pd.to_numeric(first.iloc[0].str.strip(), errors='coerce')
    return bool(numeric.isna().any())


def read_time_series(path: Union[str, Path], labels: bool = False) -> TimeSeries:
    """
    Read a sample-per-row CSV into a TimeSeries.

    Args:
        path: CSV file, one row per sample and one column per channel
        labels: Treat the final column as an integer class label in {1, 2}

    Returns:
        TimeSeries with data of shape (channels, samples)
    """
    header = 0 if detect_header(path) else None
    frame = pd.read_csv(path, header=header, float_precision='round_trip')
    try:
        values = frame.apply(pd.to_numeric, errors='raise').to_numpy(dtype=float)
    except (ValueError, TypeError) as e:
        raise InvalidArgument(f"{path} contains non-numeric samples: {e}")

    label_column = None
    if labels:
        if values.shape[1] < 2:
            raise InvalidArgument("a labeled CSV needs at least one channel and a label column")
        label_column = values[:, -1]
        if not np.all(label_column == np.round(label_column)):
            raise InvalidArgument("label column must hold integers")
        label_column = label_column.astype(int)
        values = values[:, :-1]

    logger.debug(f"Read {values.shape[0]} samples x {values.shape[1]} channels from {path}")
    return TimeSeries(data=values.T, labels=label_column)
