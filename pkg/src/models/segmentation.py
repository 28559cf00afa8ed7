"""Segmentation and detector parameter models."""
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Union

import numpy as np

from ..exceptions import InvalidArgument


@dataclass(frozen=True)
class Segmentation:
    """
    Change points at epoch granularity.

    A boundary b marks a change between epoch b-1 and epoch b.

    Attributes:
        epoch_boundaries: Strictly increasing boundaries in [1, n_epochs - 1]
        n_epochs: Number of epochs the series was divided into
        scores: Optional per-boundary score
        algorithm: Detector name
        params: Detector parameters used
    """
    epoch_boundaries: List[int]
    n_epochs: int
    scores: Optional[List[float]] = None
    algorithm: str = ""
    params: Dict = field(default_factory=dict)

    def __post_init__(self):
        boundaries = [int(b) for b in self.epoch_boundaries]
        if any(b < 1 or b > self.n_epochs - 1 for b in boundaries):
            raise InvalidArgument(f"boundaries must lie in [1, {self.n_epochs - 1}]")
        if any(later <= earlier for earlier, later in zip(boundaries, boundaries[1:])):
            raise InvalidArgument("boundaries must be strictly increasing")
        if self.scores is not None and len(self.scores) != len(boundaries):
            raise InvalidArgument("scores must match boundaries one to one")
        object.__setattr__(self, 'epoch_boundaries', boundaries)

    @property
    def boundary_set(self) -> set:
        return set(self.epoch_boundaries)

    def to_dict(self) -> dict:
        return {
            'boundaries': list(self.epoch_boundaries),
            'n_epochs': self.n_epochs,
            'scores': list(self.scores) if self.scores is not None else None,
            'algorithm': self.algorithm,
            'params': dict(self.params),
        }

    @classmethod
    def from_labels(cls, labels: Sequence[int], **kwargs) -> 'Segmentation':
        """Boundaries wherever consecutive epoch labels differ."""
        labels = np.asarray(labels)
        boundaries = (np.flatnonzero(labels[1:] != labels[:-1]) + 1).tolist()
        return cls(epoch_boundaries=boundaries, n_epochs=len(labels), **kwargs)


@dataclass(frozen=True)
class DistanceMatrix:
    """Symmetric, non-negative epoch dissimilarities with a zero diagonal."""
    values: np.ndarray

    def __post_init__(self):
        values = np.array(self.values, dtype=float)
        if values.ndim != 2 or values.shape[0] != values.shape[1]:
            raise InvalidArgument("distance matrix must be square")
        if np.max(np.abs(values - values.T), initial=0.0) > 1e-10 * max(np.max(np.abs(values), initial=0.0), 1.0):
            raise InvalidArgument("distance matrix must be symmetric")
        values = 0.5 * (values + values.T)
        np.fill_diagonal(values, 0.0)
        if np.any(values < 0):
            raise InvalidArgument("distances must be non-negative")
        values.setflags(write=False)
        object.__setattr__(self, 'values', values)

    @property
    def n(self) -> int:
        return self.values.shape[0]


@dataclass(frozen=True)
class CusumParams:
    """
    Weighted CUSUM settings.

    Attributes:
        window: Sliding window length W
        threshold: Log likelihood-ratio threshold h
        theta_grid: Candidate post-change variances, uniform and increasing
        epoch_len: Samples per epoch for reporting (defaults to W)
    """
    window: int
    threshold: float
    theta_grid: Sequence[float]
    epoch_len: Optional[int] = None

    def __post_init__(self):
        grid = np.asarray(self.theta_grid, dtype=float)
        if self.window < 2:
            raise InvalidArgument("window must be at least 2")
        if grid.size == 0 or np.any(grid <= 0) or np.any(np.diff(grid) <= 0):
            raise InvalidArgument("theta grid must be nonempty, positive and strictly increasing")
        if self.epoch_len is not None and self.epoch_len < 1:
            raise InvalidArgument("epoch_len must be positive")
        object.__setattr__(self, 'theta_grid', tuple(grid.tolist()))

    @property
    def grid_step(self) -> float:
        """Spacing b of the grid (1 for a single-point grid)."""
        grid = self.theta_grid
        return grid[1] - grid[0] if len(grid) > 1 else 1.0

    def to_dict(self) -> dict:
        return {
            'window': self.window,
            'threshold': self.threshold,
            'theta_grid': list(self.theta_grid),
            'epoch_len': self.epoch_len,
        }


@dataclass(frozen=True)
class KlParams:
    """
    Kohlmorgen/Lemm settings.

    Attributes:
        window: Epoch length W
        sigma: Kernel width, or "auto" for the nearest-neighbour rule of thumb
        transition_penalty: Cost C added per state change
    """
    window: int
    sigma: Union[float, str] = "auto"
    transition_penalty: float = 1.0

    def __post_init__(self):
        if self.window < 2:
            raise InvalidArgument("window must be at least 2")
        if isinstance(self.sigma, str):
            if self.sigma != "auto":
                raise InvalidArgument("sigma must be positive or 'auto'")
        elif self.sigma <= 0:
            raise InvalidArgument("sigma must be positive or 'auto'")

    def to_dict(self) -> dict:
        return {
            'window': self.window,
            'sigma': self.sigma,
            'transition_penalty': self.transition_penalty,
        }
