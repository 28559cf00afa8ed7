"""Epoch partitioning, moment estimation and whitening."""
import logging
from typing import List, Optional, Tuple

import numpy as np

from ..config.settings import EIGEN_RELATIVE_FLOOR
from ..exceptions import InvalidArgument, SingularCovariance, TooFewSamples
from ..models.time_series import (
    EpochPartition,
    EpochStats,
    TimeSeries,
    WhiteningTransform,
)

logger = logging.getLogger(__name__)


def _check_spd(cov: np.ndarray, what: str) -> np.ndarray:
    """Eigenvalues of a symmetric matrix, raising if it is numerically singular."""
    eigenvalues = np.linalg.eigvalsh(cov)
    top = eigenvalues[-1]
    if top <= 0 or eigenvalues[0] <= EIGEN_RELATIVE_FLOOR * top:
        raise SingularCovariance(f"{what} covariance is singular (eigenvalues {eigenvalues})")
    return eigenvalues


def partition_epochs(ts: TimeSeries, n_epochs: int) -> EpochPartition:
    """
    Split a series into n equal contiguous epochs.

    Remainder samples are appended to the last epoch.

    Args:
        ts: Input series
        n_epochs: Number of epochs

    Returns:
        EpochPartition with exactly n_epochs ranges
    """
    if n_epochs < 1:
        raise InvalidArgument("n_epochs must be positive")
    if n_epochs * (ts.dim + 2) > ts.length:
        raise TooFewSamples(
            f"{n_epochs} epochs of at least {ts.dim + 2} samples need {n_epochs * (ts.dim + 2)} "
            f"samples, series has {ts.length}"
        )
    size = ts.length // n_epochs
    starts = [i * size for i in range(n_epochs)]
    stops = starts[1:] + [ts.length]
    return EpochPartition(tuple(zip(starts, stops)))


def partition_from_ids(epoch_ids: np.ndarray) -> EpochPartition:
    """Partition from a non-decreasing per-sample epoch id vector."""
    epoch_ids = np.asarray(epoch_ids)
    if np.any(np.diff(epoch_ids) < 0):
        raise InvalidArgument("epoch ids must be non-decreasing")
    edges = np.flatnonzero(np.diff(epoch_ids)) + 1
    starts = np.concatenate([[0], edges])
    stops = np.concatenate([edges, [epoch_ids.shape[0]]])
    return EpochPartition(tuple(zip(starts.tolist(), stops.tolist())))


def sample_stats(samples: np.ndarray) -> EpochStats:
    """
    Mean (1/n) and covariance (1/(n-1)) of an (n, d) sample matrix.

    Raises:
        TooFewSamples: fewer than two samples
        SingularCovariance: covariance is rank-deficient
    """
    samples = np.atleast_2d(np.asarray(samples, dtype=float))
    if samples.shape[0] < 2:
        raise TooFewSamples("need at least two samples for a covariance")
    cov = np.atleast_2d(np.cov(samples, rowvar=False, ddof=1))
    _check_spd(cov, "sample")
    return EpochStats(mean=samples.mean(axis=0), cov=cov, count=samples.shape[0])


def epoch_moments(ts: TimeSeries, part: EpochPartition) -> List[EpochStats]:
    """
    Per-epoch mean and covariance.

    Args:
        ts: Input series
        part: Partition of ts

    Returns:
        One EpochStats per epoch
    """
    if part.ranges and part.ranges[-1][1] > ts.length:
        raise InvalidArgument("partition extends beyond the series")
    stats = []
    for index, window in enumerate(part.slices()):
        try:
            stats.append(sample_stats(ts.data[:, window].T))
        except SingularCovariance as e:
            raise SingularCovariance(f"epoch {index}: {e}")
    return stats


def average_epoch(stats: List[EpochStats]) -> Tuple[np.ndarray, np.ndarray]:
    """Mean of the epoch means and mean of the epoch covariances."""
    means = np.mean([s.mean for s in stats], axis=0)
    covs = np.mean([s.cov for s in stats], axis=0)
    return means, covs


def inverse_sqrt(cov: np.ndarray) -> np.ndarray:
    """Symmetric inverse square root via eigendecomposition."""
    cov = 0.5 * (cov + cov.T)
    eigenvalues = _check_spd(cov, "whitening")
    _, eigenvectors = np.linalg.eigh(cov)
    return (eigenvectors / np.sqrt(eigenvalues)) @ eigenvectors.T


def whiten(
    ts: TimeSeries,
    partition: Optional[EpochPartition] = None,
) -> Tuple[TimeSeries, WhiteningTransform]:
    """
    Center and whiten a series.

    Without a partition the pooled mean and covariance are standardized. With one, the
    average epoch (mean of epoch means, mean of epoch covariances) becomes N(0, I),
    which is the standardization the subspace objective assumes.

    Returns:
        (whitened series, transform)
    """
    if partition is None:
        center = ts.data.mean(axis=1)
        cov = np.atleast_2d(np.cov(ts.data, ddof=1))
    else:
        center, cov = average_epoch(epoch_moments(ts, partition))

    transform = WhiteningTransform(matrix=inverse_sqrt(cov), center=center)
    logger.debug(f"Whitened {ts.dim}-channel series ({'pooled' if partition is None else 'average epoch'})")
    return ts.with_data(transform.apply(ts.data)), transform
