"""Projection and SSA solution models."""
from dataclasses import dataclass, field
from enum import Enum
from typing import List, Optional

import numpy as np

from ..config.settings import (
    SSA_DEFAULT_EPOCHS,
    SSA_GRADIENT_TOLERANCE,
    SSA_MAX_ITERATIONS,
    SSA_RESTARTS,
)
from ..exceptions import InvalidArgument, InvalidDimension
from .time_series import TimeSeries, WhiteningTransform


class ProjectionKind(Enum):
    """Which group of sources a projection extracts."""
    STATIONARY = "stationary"
    NONSTATIONARY = "nonstationary"
    RANDOM = "random"


@dataclass(frozen=True)
class Projection:
    """
    A d x D matrix with orthonormal rows.

    Attributes:
        matrix: Projection matrix B, shape (d, D)
        kind: Whether B extracts stationary or non-stationary sources
    """
    matrix: np.ndarray
    kind: ProjectionKind = ProjectionKind.STATIONARY

    def __post_init__(self):
        matrix = np.array(np.atleast_2d(self.matrix), dtype=float)
        d, D = matrix.shape
        if d < 1 or d > D:
            raise InvalidDimension(f"projection must satisfy 1 <= d <= D, got {matrix.shape}")
        if np.max(np.abs(matrix @ matrix.T - np.eye(d))) > 1e-8:
            raise InvalidArgument("projection rows must be orthonormal")
        matrix.setflags(write=False)
        object.__setattr__(self, 'matrix', matrix)
        object.__setattr__(self, 'kind', ProjectionKind(self.kind))

    @property
    def d(self) -> int:
        return self.matrix.shape[0]

    @property
    def D(self) -> int:
        return self.matrix.shape[1]

    def apply(self, data: np.ndarray) -> np.ndarray:
        """Project a (D, T) data matrix to (d, T)."""
        return self.matrix @ data

    def to_dict(self) -> dict:
        return {'kind': self.kind.value, 'matrix': self.matrix.tolist()}


@dataclass(frozen=True)
class SsaConfig:
    """Optimizer settings for stationary subspace searches."""
    n_epochs: int = SSA_DEFAULT_EPOCHS
    n_restarts: int = SSA_RESTARTS
    max_iterations: int = SSA_MAX_ITERATIONS
    gradient_tolerance: float = SSA_GRADIENT_TOLERANCE
    seed: int = 0

    def __post_init__(self):
        if self.n_epochs < 1:
            raise InvalidArgument("n_epochs must be positive")
        if self.n_restarts < 1:
            raise InvalidArgument("n_restarts must be at least 1")
        if self.max_iterations < 1:
            raise InvalidArgument("max_iterations must be positive")
        if self.gradient_tolerance <= 0:
            raise InvalidArgument("gradient_tolerance must be positive")

    def to_dict(self) -> dict:
        return {
            'n_epochs': self.n_epochs,
            'n_restarts': self.n_restarts,
            'max_iterations': self.max_iterations,
            'gradient_tolerance': self.gradient_tolerance,
            'seed': self.seed,
        }


@dataclass(frozen=True)
class SsaSolution:
    """
    Result of a stationary or non-stationary subspace search.

    Attributes:
        projection: Best projection found (in whitened coordinates)
        loss: SSA loss at the projection
        per_restart_losses: Final loss of every restart, in restart order
        iterations_used: Iterations of the winning restart
        rotation: Full D x D orthogonal matrix whose top rows are the projection
        whitening: Transform mapping raw data into the optimizer's coordinates
    """
    projection: Projection
    loss: float
    per_restart_losses: List[float] = field(default_factory=list)
    iterations_used: int = 0
    rotation: Optional[np.ndarray] = None
    whitening: Optional[WhiteningTransform] = None

    def complement(self) -> Projection:
        """Orthogonal complement of the projection, from the full rotation."""
        if self.rotation is None:
            raise InvalidArgument("solution carries no full rotation")
        d = self.projection.d
        kind = (ProjectionKind.NONSTATIONARY
                if self.projection.kind == ProjectionKind.STATIONARY
                else ProjectionKind.STATIONARY)
        return Projection(self.rotation[d:], kind)

    def demixing_matrix(self) -> np.ndarray:
        """Projection composed with whitening, applicable to raw data."""
        if self.whitening is None:
            return self.projection.matrix
        return self.projection.matrix @ self.whitening.matrix

    def transform(self, ts: TimeSeries) -> TimeSeries:
        """Estimated sources of ts under this solution."""
        data = ts.data if self.whitening is None else self.whitening.apply(ts.data)
        return ts.with_data(self.projection.apply(data))

    def to_dict(self) -> dict:
        return {
            'projection': self.projection.to_dict(),
            'loss': self.loss,
            'per_restart_losses': list(self.per_restart_losses),
            'iterations_used': self.iterations_used,
            'demixing_matrix': self.demixing_matrix().tolist(),
            'whitening': self.whitening.to_dict() if self.whitening else None,
        }
