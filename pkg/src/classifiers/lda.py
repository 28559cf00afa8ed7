"""Closed-form and shrinkage linear discriminant analysis."""
import logging
from typing import Union

import numpy as np

from ..config.settings import EIGEN_RELATIVE_FLOOR
from ..exceptions import DegenerateSeparation, SingularCovariance, TooFewSamples, ZeroVector
from ..models.classifier import ClassEpochStats, LinearClassifier
from ..stats.shrinkage import shrinkage_cov

logger = logging.getLogger(__name__)


def _as_samples(samples: np.ndarray) -> np.ndarray:
    samples = np.asarray(samples, dtype=float)
    samples = samples[:, np.newaxis] if samples.ndim == 1 else samples
    if samples.shape[0] < 2:
        raise TooFewSamples("each class needs at least two samples")
    return samples


def lda_from_moments(mean1: np.ndarray, mean2: np.ndarray, cov1: np.ndarray, cov2: np.ndarray,
                     method: str = "lda") -> LinearClassifier:
    """
    Fisher discriminant from class moments.

    w = (S1 + S2)^-1 (m1 - m2) and b = -w^T (m1 + m2) / 2, so class 1 lies on the
    positive side of the hyperplane.
    """
    mean1, mean2 = np.atleast_1d(mean1), np.atleast_1d(mean2)
    summed = np.atleast_2d(cov1) + np.atleast_2d(cov2)
    eigenvalues = np.linalg.eigvalsh(summed)
    if eigenvalues[-1] <= 0 or eigenvalues[0] <= EIGEN_RELATIVE_FLOOR * eigenvalues[-1]:
        raise SingularCovariance("summed class covariance is singular")

    w = np.linalg.solve(summed, mean1 - mean2)
    if not np.any(w):
        raise DegenerateSeparation("class means coincide")
    b = -0.5 * float(w @ (mean1 + mean2))
    return LinearClassifier(w=w, b=b, method=method)


def lda_train(class1: np.ndarray, class2: np.ndarray) -> LinearClassifier:
    """
    Closed-form LDA.

    Args:
        class1: (n1, D) samples of class 1
        class2: (n2, D) samples of class 2
    """
    class1, class2 = _as_samples(class1), _as_samples(class2)
    return lda_from_moments(
        class1.mean(axis=0), class2.mean(axis=0),
        np.cov(class1, rowvar=False, ddof=1), np.cov(class2, rowvar=False, ddof=1),
    )


def rlda_train(class1: np.ndarray, class2: np.ndarray,
               gamma: Union[float, str] = "auto") -> LinearClassifier:
    """LDA with each class covariance shrunk towards a scaled identity."""
    class1, class2 = _as_samples(class1), _as_samples(class2)
    classifier = lda_from_moments(
        class1.mean(axis=0), class2.mean(axis=0),
        shrinkage_cov(class1, gamma), shrinkage_cov(class2, gamma),
        method="rlda",
    )
    logger.debug(f"rLDA trained with gamma={gamma}")
    return classifier


def fisher_ratio(w: np.ndarray, stats: ClassEpochStats) -> float:
    """(w^T (m1 - m2))^2 / w^T (S1 + S2) w on pooled class moments."""
    w = np.asarray(w, dtype=float)
    if not np.any(w):
        raise ZeroVector("direction has zero norm")
    projected_gap = float(w @ stats.mean_difference)
    return projected_gap ** 2 / float(w @ stats.summed_cov @ w)
