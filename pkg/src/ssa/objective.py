"""The SSA objective and its Euclidean gradient."""
from typing import Sequence, Union

import numpy as np

from ..exceptions import DimensionMismatch, InvalidArgument, SingularCovariance
from ..models.projection import Projection
from ..models.time_series import EpochStats

MatrixLike = Union[Projection, np.ndarray]


def _as_matrix(B: MatrixLike) -> np.ndarray:
    if isinstance(B, Projection):
        return B.matrix
    return np.atleast_2d(np.asarray(B, dtype=float))


class SsaObjective:
    """
    Sum over epochs of -log det(B S_i B^T) + ||B m_i||^2.

    Epoch moments are stacked once so repeated evaluations inside the optimizer
    only cost one batched projection and one batched log-determinant.
    """

    def __init__(self, stats: Sequence[EpochStats]):
        if not stats:
            raise InvalidArgument("need at least one epoch")
        self.covs = np.array([s.cov for s in stats])
        means = np.array([s.mean for s in stats])
        self.dim = means.shape[1]
        # sum_i m_i m_i^T, so the mean term is tr(B M B^T)
        self.mean_scatter = means.T @ means

    def _projected(self, B: np.ndarray) -> np.ndarray:
        if B.shape[1] != self.dim:
            raise DimensionMismatch(f"projection has {B.shape[1]} columns, data has {self.dim} channels")
        return B @ self.covs @ B.T

    def value(self, B: MatrixLike) -> float:
        B = _as_matrix(B)
        signs, logdets = np.linalg.slogdet(self._projected(B))
        if np.any(signs <= 0):
            raise SingularCovariance("projected epoch covariance is singular")
        return float(-np.sum(logdets) + np.trace(B @ self.mean_scatter @ B.T))

    def gradient(self, B: MatrixLike) -> np.ndarray:
        """d x D matrix of partial derivatives with respect to the entries of B."""
        B = _as_matrix(B)
        projected = self._projected(B)
        try:
            inverses = np.linalg.inv(projected)
        except np.linalg.LinAlgError:
            raise SingularCovariance("projected epoch covariance is singular")
        # sum_i (B S_i B^T)^-1 B S_i
        logdet_term = np.sum(inverses @ B @ self.covs, axis=0)
        return -2.0 * logdet_term + 2.0 * B @ self.mean_scatter


def ssa_loss(B: MatrixLike, stats: Sequence[EpochStats]) -> float:
    """
    SSA loss of projection B on (whitened) epoch moments.

    Args:
        B: Projection or d x D matrix with orthonormal rows
        stats: Epoch moments of the whitened data

    Returns:
        Sum over epochs of -log det of the projected covariance plus the squared
        norm of the projected mean
    """
    return SsaObjective(stats).value(B)


def ssa_loss_gradient(B: MatrixLike, stats: Sequence[EpochStats]) -> np.ndarray:
    """Euclidean gradient of ssa_loss with respect to the entries of B."""
    return SsaObjective(stats).gradient(B)
