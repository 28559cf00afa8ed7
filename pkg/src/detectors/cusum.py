"""Weighted CUSUM for changes in variance."""
import logging
import math
from typing import List, Tuple

import numpy as np
from scipy.special import logsumexp

from ..config.settings import VARIANCE_FLOOR
from ..exceptions import DegenerateVariance, DimensionMismatch, TooFewSamples
from ..models.segmentation import CusumParams, Segmentation
from ..models.time_series import TimeSeries

logger = logging.getLogger(__name__)


def _reference(x: np.ndarray, end: int, window: int) -> Tuple[float, float]:
    """Mean and variance of the W samples ending at index end (inclusive)."""
    reference = x[end - window + 1:end + 1]
    variance = float(np.var(reference, ddof=1))
    if variance < VARIANCE_FLOOR:
        raise DegenerateVariance(f"reference window ending at {end} has variance {variance:.3e}")
    return float(reference.mean()), variance


def log_likelihood_ratio(sum_squares: np.ndarray, window: int, theta0: float,
                         theta_grid: np.ndarray, grid_step: float) -> np.ndarray:
    """
    log of (1/b) * sum_i p_theta_i(y) / p_theta0(y) for zero-mean Gaussian windows.

    Args:
        sum_squares: Sum of squared (centered) samples of each window
        window: Window length W
        theta0: Reference variance
        theta_grid: Candidate post-change variances
        grid_step: Grid spacing b
    """
    sum_squares = np.atleast_1d(sum_squares)[:, np.newaxis]
    log_ratios = (-0.5 * window * np.log(theta_grid / theta0)
                  - 0.5 * sum_squares * (1.0 / theta_grid - 1.0 / theta0))
    return logsumexp(log_ratios, axis=1) - math.log(grid_step)


def cusum_scan(x: np.ndarray, params: CusumParams) -> List[Tuple[int, float]]:
    """
    Sequential scan returning (detection time, log ratio) pairs.

    The reference variance starts from the first W samples and the current time
    t_c from index W. At t_c the window x[t_c-W+1 .. t_c] is tested against the
    reference; on a detection t_c advances by W and the reference is re-estimated
    on the W samples ending at the new t_c, otherwise t_c advances by one.
    """
    window = params.window
    grid = np.asarray(params.theta_grid, dtype=float)
    length = x.shape[0]
    if length < 2 * window:
        raise TooFewSamples(f"CUSUM needs at least 2W={2 * window} samples, got {length}")

    detections = []
    t_c = window
    center, theta0 = _reference(x, window - 1, window)
    while t_c < length:
        # windows ending at t_c, t_c+1, ..., length-1 under the current reference
        squares = np.concatenate([[0.0], np.cumsum((x[t_c - window + 1:] - center) ** 2)])
        sums = squares[window:] - squares[:-window]
        scores = log_likelihood_ratio(sums, window, theta0, grid, params.grid_step)
        crossing = np.flatnonzero(scores >= params.threshold)
        if crossing.size == 0:
            break
        t_c += int(crossing[0])
        detections.append((t_c, float(scores[crossing[0]])))
        logger.debug(f"CUSUM detection at {t_c} (log ratio {scores[crossing[0]]:.3f})")
        t_c += window
        if t_c >= length:
            break
        center, theta0 = _reference(x, t_c, window)
    return detections


def cusum_weighted(signal: TimeSeries, params: CusumParams) -> Segmentation:
    """
    Weighted CUSUM segmentation of a one-dimensional series.

    A detection at sample t is reported at the first epoch boundary at or after the
    start of the detecting window, t - W + 1. With epoch_len unset, epochs are W long.

    Args:
        signal: Single-channel series
        params: Window, threshold and variance grid

    Returns:
        Segmentation at epoch granularity; scores are the log ratios at detection
    """
    if signal.dim != 1:
        raise DimensionMismatch(f"CUSUM works on one channel, got {signal.dim}")
    x = signal.data[0]
    epoch_len = params.epoch_len or params.window
    n_epochs = signal.length // epoch_len

    best = {}
    for time, score in cusum_scan(x, params):
        boundary = math.ceil((time - params.window + 1) / epoch_len)
        boundary = min(max(boundary, 1), n_epochs - 1)
        if boundary < 1:
            continue
        best[boundary] = max(score, best.get(boundary, -np.inf))

    boundaries = sorted(best)
    return Segmentation(
        epoch_boundaries=boundaries,
        n_epochs=n_epochs,
        scores=[best[b] for b in boundaries],
        algorithm="cusum",
        params=params.to_dict(),
    )
