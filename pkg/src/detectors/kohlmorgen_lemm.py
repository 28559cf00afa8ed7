"""Kernel-density state segmentation in the style of Kohlmorgen and Lemm."""
import logging
import math
from typing import Union

import numpy as np
from scipy.spatial import cKDTree
from scipy.spatial.distance import cdist

from ..config.settings import SIGMA_SUBSAMPLE
from ..exceptions import DegenerateVariance, DimensionMismatch, TooFewSamples
from ..models.segmentation import DistanceMatrix, KlParams, Segmentation
from ..models.time_series import TimeSeries

logger = logging.getLogger(__name__)


def _as_window(samples: np.ndarray) -> np.ndarray:
    samples = np.asarray(samples, dtype=float)
    return samples[:, np.newaxis] if samples.ndim == 1 else samples


def _kernel_prefactor(window: int, dim: int, sigma: float) -> float:
    return 1.0 / (window ** 2 * (4.0 * math.pi * sigma ** 2) ** (dim / 2.0))


def _kernel_sum(a: np.ndarray, b: np.ndarray, sigma: float) -> float:
    return float(np.exp(-cdist(a, b, 'sqeuclidean') / (4.0 * sigma ** 2)).sum())


def kl_window_distance(E_i: np.ndarray, E_j: np.ndarray, sigma: float) -> float:
    """
    L2 distance between Gaussian kernel density estimates of two windows.

    Args:
        E_i: (W, d) samples of the first window (a 1-D array is one channel)
        E_j: (W, d) samples of the second window
        sigma: Kernel width

    Returns:
        1/(W^2 (4 pi sigma^2)^(d/2)) times the sum of the within-i, within-j and
        twice the negated cross kernel sums
    """
    E_i, E_j = _as_window(E_i), _as_window(E_j)
    if E_i.shape != E_j.shape:
        raise DimensionMismatch(f"windows must have equal shape, got {E_i.shape} and {E_j.shape}")
    window, dim = E_i.shape
    total = (_kernel_sum(E_i, E_i, sigma) - 2.0 * _kernel_sum(E_i, E_j, sigma)
             + _kernel_sum(E_j, E_j, sigma))
    return max(_kernel_prefactor(window, dim, sigma) * total, 0.0)


def kl_sigma_heuristic(ts: TimeSeries) -> float:
    """
    Mean distance of each sample to its D nearest neighbours.

    Evaluated on at most SIGMA_SUBSAMPLE evenly spaced samples.
    """
    dim = ts.dim
    if ts.length < dim + 1:
        raise TooFewSamples(f"need at least D+1={dim + 1} samples, got {ts.length}")
    count = min(ts.length, SIGMA_SUBSAMPLE)
    indices = np.unique(np.linspace(0, ts.length - 1, count).round().astype(int))
    points = ts.data[:, indices].T
    neighbours = min(dim, points.shape[0] - 1)
    distances, _ = cKDTree(points).query(points, k=neighbours + 1)
    sigma = float(np.mean(distances[:, 1:]))
    if sigma <= 0:
        raise DegenerateVariance("samples coincide, kernel width would be zero")
    return sigma


def window_distance_matrix(ts: TimeSeries, window: int, sigma: float) -> DistanceMatrix:
    """
    Kernel L2 distances between all non-overlapping windows of length W.

    Trailing samples that do not fill a window are ignored. Cross kernel sums
    between one window and every sample are computed a window at a time.
    """
    n_windows = ts.length // window
    points = ts.data[:, :n_windows * window].T
    cross = np.empty((n_windows, n_windows))
    for i in range(n_windows):
        kernel = np.exp(-cdist(points[i * window:(i + 1) * window], points, 'sqeuclidean')
                        / (4.0 * sigma ** 2))
        cross[i] = kernel.reshape(window, n_windows, window).sum(axis=(0, 2))
    cross = 0.5 * (cross + cross.T)
    self_sums = np.diag(cross)
    values = _kernel_prefactor(window, ts.dim, sigma) * (
        self_sums[:, np.newaxis] + self_sums[np.newaxis, :] - 2.0 * cross
    )
    values = np.maximum(values, 0.0)
    np.fill_diagonal(values, 0.0)
    return DistanceMatrix(values)


def viterbi_states(dm: DistanceMatrix, transition_penalty: float) -> np.ndarray:
    """
    Cheapest state sequence where state s of epoch t costs dm[t, s].

    Every epoch density is a candidate state; switching states adds the penalty C.
    On ties the chain stays in its current state and the lowest state index wins.
    """
    cost = dm.values
    n = dm.n
    value = cost[0].copy()
    stayed = np.zeros((n, n), dtype=bool)
    switch_from = np.zeros(n, dtype=int)
    for t in range(1, n):
        best_prev = int(np.argmin(value))
        switch_cost = value[best_prev] + transition_penalty
        stay = value <= switch_cost
        stayed[t] = stay
        switch_from[t] = best_prev
        value = cost[t] + np.where(stay, value, switch_cost)

    states = np.empty(n, dtype=int)
    states[-1] = int(np.argmin(value))
    for t in range(n - 1, 0, -1):
        current = states[t]
        states[t - 1] = current if stayed[t, current] else switch_from[t]
    return states


def segment_from_window_distances(dm: DistanceMatrix, transition_penalty: float,
                                  params: dict = None) -> Segmentation:
    """Viterbi decoding on a precomputed window distance matrix."""
    states = viterbi_states(dm, transition_penalty)
    segmentation = Segmentation.from_labels(states)
    scores = [float(dm.values[b - 1, b]) for b in segmentation.epoch_boundaries]
    return Segmentation(
        epoch_boundaries=segmentation.epoch_boundaries,
        n_epochs=dm.n,
        scores=scores,
        algorithm="kl",
        params=params or {'transition_penalty': transition_penalty},
    )


def resolve_sigma(ts: TimeSeries, sigma: Union[float, str]) -> float:
    return kl_sigma_heuristic(ts) if sigma == "auto" else float(sigma)


def kohlmorgen_lemm(ts: TimeSeries, params: KlParams) -> Segmentation:
    """
    Segment a series by Viterbi decoding over epoch kernel-density states.

    Args:
        ts: Input series with at least 2W samples
        params: Window length, kernel width and switching penalty

    Returns:
        Segmentation with a boundary wherever consecutive epochs get different states
    """
    if ts.length < 2 * params.window:
        raise TooFewSamples(f"need at least 2W={2 * params.window} samples, got {ts.length}")
    sigma = resolve_sigma(ts, params.sigma)
    dm = window_distance_matrix(ts, params.window, sigma)
    resolved = {**params.to_dict(), 'sigma': sigma}
    segmentation = segment_from_window_distances(dm, params.transition_penalty, resolved)
    logger.debug(f"K/L C={params.transition_penalty:g}: {len(segmentation.epoch_boundaries)} boundaries")
    return segmentation
