"""Shrinkage covariance estimation."""
import logging
from typing import Union

import numpy as np
from sklearn.covariance import ledoit_wolf_shrinkage

from ..exceptions import InvalidArgument, TooFewSamples

logger = logging.getLogger(__name__)


def shrinkage_cov(samples: np.ndarray, gamma: Union[float, str] = "auto") -> np.ndarray:
    """
    Covariance shrunk towards a scaled identity.

    (1 - gamma) * S + gamma * nu * I with nu = trace(S) / d, where S is the sample
    covariance with the n-1 normalizer. The trace of S is preserved for every gamma.

    Args:
        samples: (n, d) sample matrix
        gamma: Intensity in [0, 1], or "auto" for the analytic Ledoit-Wolf intensity

    Returns:
        Shrunk d x d covariance
    """
    samples = np.atleast_2d(np.asarray(samples, dtype=float))
    if samples.shape[0] < 2:
        raise TooFewSamples("need at least two samples for a covariance")

    if isinstance(gamma, str):
        if gamma != "auto":
            raise InvalidArgument(f"gamma must be a number in [0, 1] or 'auto', got '{gamma}'")
        gamma = float(ledoit_wolf_shrinkage(samples))
        logger.debug(f"Ledoit-Wolf shrinkage intensity {gamma:.4f}")
    elif not 0.0 <= gamma <= 1.0:
        raise InvalidArgument(f"gamma must lie in [0, 1], got {gamma}")

    cov = np.atleast_2d(np.cov(samples, rowvar=False, ddof=1))
    nu = np.trace(cov) / cov.shape[0]
    return (1.0 - gamma) * cov + gamma * nu * np.eye(cov.shape[0])
