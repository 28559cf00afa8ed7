"""Per-epoch, per-class moments for the stationarity-penalized classifiers."""
from typing import Optional

import numpy as np

from ..exceptions import InvalidArgument, TooFewSamples
from ..models.classifier import ClassEpochStats
from ..models.time_series import TimeSeries


def contiguous_epoch_ids(length: int, n_epochs: int) -> np.ndarray:
    """Equal contiguous blocks, remainder samples joining the last block."""
    if n_epochs < 1 or n_epochs > length:
        raise InvalidArgument(f"cannot split {length} samples into {n_epochs} epochs")
    size = length // n_epochs
    return np.minimum(np.arange(length) // size, n_epochs - 1)


def with_epoch_ids(data: TimeSeries, n_epochs: int) -> TimeSeries:
    """
    The series itself if it carries epoch ids, otherwise with contiguous ones.

    Labeled series are blocked along each class's own sample order, so a file
    listing all of class 1 before class 2 still gives every epoch both classes.
    """
    if data.epoch_ids is not None:
        return data
    if data.labels is None:
        return TimeSeries(data=data.data, epoch_ids=contiguous_epoch_ids(data.length, n_epochs))
    epoch_ids = np.empty(data.length, dtype=int)
    for label in (1, 2):
        members = np.flatnonzero(data.labels == label)
        epoch_ids[members] = contiguous_epoch_ids(members.size, n_epochs)
    return TimeSeries(data=data.data, labels=data.labels, epoch_ids=epoch_ids)


def _moments(samples: np.ndarray, what: str):
    if samples.shape[0] < 2:
        raise TooFewSamples(f"{what} has {samples.shape[0]} samples, need at least 2")
    return samples.mean(axis=0), np.atleast_2d(np.cov(samples, rowvar=False, ddof=1))


def build_class_epoch_stats(data: TimeSeries, n_epochs: Optional[int] = None) -> ClassEpochStats:
    """
    Class moments per epoch and pooled over all epochs.

    Epochs come from data.epoch_ids when present, otherwise from n_epochs contiguous
    blocks of the sample order.

    Raises:
        TooFewSamples: an epoch holds fewer than two samples of a class
    """
    if not data.is_labeled:
        raise InvalidArgument("class statistics need labeled data")
    if data.epoch_ids is None:
        if n_epochs is None:
            raise InvalidArgument("need epoch ids or an epoch count")
        data = with_epoch_ids(data, n_epochs)

    epoch_means, epoch_covs = [], []
    for epoch in np.unique(data.epoch_ids):
        in_epoch = data.epoch_ids == epoch
        means, covs = [], []
        for label in (1, 2):
            samples = data.data[:, in_epoch & (data.labels == label)].T
            mean, cov = _moments(samples, f"epoch {epoch}, class {label}")
            means.append(mean)
            covs.append(cov)
        epoch_means.append(means)
        epoch_covs.append(covs)

    pooled = [_moments(data.class_samples(label), f"class {label}") for label in (1, 2)]
    return ClassEpochStats(
        epoch_means=epoch_means,
        epoch_covs=epoch_covs,
        pooled_means=[m for m, _ in pooled],
        pooled_covs=[c for _, c in pooled],
    )
