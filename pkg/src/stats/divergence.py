"""Gaussian Kullback-Leibler divergences."""
from typing import Sequence

import numpy as np
from scipy import linalg

from ..exceptions import DimensionMismatch, SingularCovariance
from ..models.segmentation import DistanceMatrix
from ..models.time_series import GaussianParams


def _cholesky(cov: np.ndarray):
    try:
        return linalg.cho_factor(cov, lower=True)
    except linalg.LinAlgError:
        raise SingularCovariance("covariance is not positive definite")


def kl_gauss(p: GaussianParams, q: GaussianParams) -> float:
    """
    KL(p || q) for multivariate Gaussians.

    0.5 * (tr(Sq^-1 Sp) + (mq - mp)^T Sq^-1 (mq - mp) - d + log det Sq - log det Sp)
    """
    if p.dim != q.dim:
        raise DimensionMismatch(f"dimensions differ: {p.dim} vs {q.dim}")
    chol_p = _cholesky(p.cov)
    chol_q = _cholesky(q.cov)

    diff = q.mean - p.mean
    trace_term = np.trace(linalg.cho_solve(chol_q, p.cov))
    mahalanobis = diff @ linalg.cho_solve(chol_q, diff)
    logdet_q = 2.0 * np.sum(np.log(np.diag(chol_q[0])))
    logdet_p = 2.0 * np.sum(np.log(np.diag(chol_p[0])))

    value = 0.5 * (trace_term + mahalanobis - p.dim + logdet_q - logdet_p)
    return max(float(value), 0.0)


def symmetrized_kl(p: GaussianParams, q: GaussianParams) -> float:
    """0.5 * KL(p || q) + 0.5 * KL(q || p)."""
    return 0.5 * (kl_gauss(p, q) + kl_gauss(q, p))


def pairwise_symmetrized_kl(stats: Sequence[GaussianParams]) -> DistanceMatrix:
    """
    Symmetrized KL between every pair of Gaussians.

    The log-determinants cancel in the symmetrized form, so each covariance is
    inverted once and the pairwise terms are assembled with einsum.
    """
    means = np.array([s.mean for s in stats])
    covs = np.array([s.cov for s in stats])
    dim = means.shape[1]
    try:
        inverses = np.array([linalg.inv(c, check_finite=False) for c in covs])
    except linalg.LinAlgError:
        raise SingularCovariance("epoch covariance is singular")

    # traces[i, j] = tr(S_i^-1 S_j)
    traces = np.einsum('iab,jba->ij', inverses, covs)
    diffs = means[np.newaxis, :, :] - means[:, np.newaxis, :]
    # quad[i, j] = (m_j - m_i)^T S_i^-1 (m_j - m_i)
    quad = np.einsum('ijd,ide,ije->ij', diffs, inverses, diffs)

    values = 0.25 * (traces + traces.T) + 0.25 * (quad + quad.T) - 0.5 * dim
    values = np.maximum(values, 0.0)
    np.fill_diagonal(values, 0.0)
    return DistanceMatrix(values)
