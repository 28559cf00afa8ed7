"""Time series, epoch and Gaussian moment models."""
from dataclasses import dataclass, field
from typing import List, Optional, Tuple

import numpy as np

from ..exceptions import DimensionMismatch, InvalidArgument, SingularCovariance


def _frozen(array: np.ndarray) -> np.ndarray:
    array = np.array(array, dtype=float)
    array.setflags(write=False)
    return array


@dataclass(frozen=True)
class TimeSeries:
    """
    A D-dimensional signal of T samples.

    Attributes:
        data: Matrix of shape (D, T), channels by samples
        labels: Optional per-sample class tag in {1, 2}
        epoch_ids: Optional per-sample epoch index (0-based)
    """
    data: np.ndarray
    labels: Optional[np.ndarray] = None
    epoch_ids: Optional[np.ndarray] = None

    def __post_init__(self):
        """Validate shape, finiteness and labels."""
        data = np.array(self.data, dtype=float)
        if data.ndim == 1:
            data = data[np.newaxis, :]
        if data.ndim != 2:
            raise InvalidArgument("data must be a D x T matrix")
        if data.shape[0] < 1 or data.shape[1] < 2:
            raise InvalidArgument(f"need D >= 1 and T >= 2, got shape {data.shape}")
        if not np.all(np.isfinite(data)):
            raise InvalidArgument("every sample must be finite")
        data.setflags(write=False)
        object.__setattr__(self, 'data', data)

        if self.labels is not None:
            labels = np.asarray(self.labels, dtype=int).ravel()
            if labels.shape[0] != data.shape[1]:
                raise DimensionMismatch("labels must have one entry per sample")
            if not set(np.unique(labels)) <= {1, 2}:
                raise InvalidArgument("labels must take values in {1, 2}")
            if not (np.any(labels == 1) and np.any(labels == 2)):
                raise InvalidArgument("both classes must occur at least once")
            labels.setflags(write=False)
            object.__setattr__(self, 'labels', labels)

        if self.epoch_ids is not None:
            epoch_ids = np.asarray(self.epoch_ids, dtype=int).ravel()
            if epoch_ids.shape[0] != data.shape[1]:
                raise DimensionMismatch("epoch_ids must have one entry per sample")
            epoch_ids.setflags(write=False)
            object.__setattr__(self, 'epoch_ids', epoch_ids)

    @property
    def dim(self) -> int:
        """Number of channels D."""
        return self.data.shape[0]

    @property
    def length(self) -> int:
        """Number of samples T."""
        return self.data.shape[1]

    @property
    def is_labeled(self) -> bool:
        return self.labels is not None

    def with_data(self, data: np.ndarray) -> 'TimeSeries':
        """Same labels and epochs, new channel data (e.g. after projection)."""
        return TimeSeries(data=data, labels=self.labels, epoch_ids=self.epoch_ids)

    def subset(self, indices: np.ndarray) -> 'TimeSeries':
        """Restrict to the given sample indices, keeping their labels and epochs."""
        indices = np.asarray(indices)
        return TimeSeries(
            data=self.data[:, indices],
            labels=self.labels[indices] if self.labels is not None else None,
            epoch_ids=self.epoch_ids[indices] if self.epoch_ids is not None else None,
        )

    def class_samples(self, label: int) -> np.ndarray:
        """Samples of one class as an (n, D) matrix."""
        if self.labels is None:
            raise InvalidArgument("time series carries no labels")
        return self.data[:, self.labels == label].T


@dataclass(frozen=True)
class EpochPartition:
    """Ordered, disjoint, contiguous sample ranges [start, stop)."""
    ranges: Tuple[Tuple[int, int], ...]

    def __post_init__(self):
        previous_stop = 0
        for start, stop in self.ranges:
            if start < previous_stop or stop <= start:
                raise InvalidArgument("epoch ranges must be ordered and non-overlapping")
            previous_stop = stop

    @property
    def n_epochs(self) -> int:
        return len(self.ranges)

    @property
    def sizes(self) -> List[int]:
        return [stop - start for start, stop in self.ranges]

    def slices(self) -> List[slice]:
        return [slice(start, stop) for start, stop in self.ranges]

    def epoch_ids(self, length: int) -> np.ndarray:
        """Per-sample epoch index; samples outside every range get -1."""
        ids = np.full(length, -1, dtype=int)
        for index, (start, stop) in enumerate(self.ranges):
            ids[start:stop] = index
        return ids


@dataclass(frozen=True)
class GaussianParams:
    """Mean and covariance of a multivariate Gaussian."""
    mean: np.ndarray
    cov: np.ndarray

    def __post_init__(self):
        mean = _frozen(np.atleast_1d(self.mean))
        cov = _frozen(np.atleast_2d(self.cov))
        if cov.shape != (mean.shape[0], mean.shape[0]):
            raise DimensionMismatch(
                f"mean of length {mean.shape[0]} does not match covariance {cov.shape}"
            )
        object.__setattr__(self, 'mean', mean)
        object.__setattr__(self, 'cov', cov)

    @property
    def dim(self) -> int:
        return self.mean.shape[0]


@dataclass(frozen=True)
class EpochStats(GaussianParams):
    """Per-epoch mean vector and covariance matrix, with the epoch's sample count."""
    count: int = 0

    def __post_init__(self):
        super().__post_init__()
        cov = self.cov
        scale = max(np.max(np.abs(cov)), 1.0)
        if np.max(np.abs(cov - cov.T)) > 1e-10 * scale:
            raise SingularCovariance("epoch covariance is not symmetric")

    def project(self, matrix: np.ndarray) -> 'EpochStats':
        """Moments of the projected epoch, B mu and B Sigma B^T."""
        matrix = np.atleast_2d(matrix)
        cov = matrix @ self.cov @ matrix.T
        return EpochStats(mean=matrix @ self.mean, cov=0.5 * (cov + cov.T), count=self.count)


@dataclass(frozen=True)
class WhiteningTransform:
    """Affine map x -> W (x - center)."""
    matrix: np.ndarray
    center: np.ndarray = field(default=None)

    def __post_init__(self):
        matrix = _frozen(np.atleast_2d(self.matrix))
        center = np.zeros(matrix.shape[1]) if self.center is None else self.center
        object.__setattr__(self, 'matrix', matrix)
        object.__setattr__(self, 'center', _frozen(np.atleast_1d(center)))

    def apply(self, data: np.ndarray) -> np.ndarray:
        """Whiten a (D, T) data matrix."""
        return self.matrix @ (np.asarray(data) - self.center[:, np.newaxis])

    def to_dict(self) -> dict:
        return {'matrix': self.matrix.tolist(), 'center': self.center.tolist()}
