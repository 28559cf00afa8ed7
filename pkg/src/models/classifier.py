"""Linear classifier models."""
from dataclasses import dataclass
from typing import List, Optional, Sequence

import numpy as np

from ..config.settings import SLDA_EPOCHS, SLDA_RESTARTS
from ..exceptions import InvalidArgument


@dataclass(frozen=True)
class LinearClassifier:
    """
    Hyperplane classifier with normal w and bias b.

    A sample x is assigned class 1 when w^T x + b > 0 and class 2 otherwise.
    """
    w: np.ndarray
    b: float
    alpha: Optional[float] = None
    method: str = "lda"

    def __post_init__(self):
        w = np.array(np.atleast_1d(self.w), dtype=float)
        w.setflags(write=False)
        object.__setattr__(self, 'w', w)
        object.__setattr__(self, 'b', float(self.b))

    @property
    def dim(self) -> int:
        return self.w.shape[0]

    def decision_function(self, samples: np.ndarray) -> np.ndarray:
        """w^T x + b for each row of an (n, D) sample matrix."""
        return np.atleast_2d(samples) @ self.w + self.b

    def predict(self, samples: np.ndarray) -> np.ndarray:
        """Class labels in {1, 2}."""
        return np.where(self.decision_function(samples) > 0, 1, 2)

    def error_rate(self, samples: np.ndarray, labels: np.ndarray) -> float:
        return float(np.mean(self.predict(samples) != np.asarray(labels)))

    def normalized(self) -> 'LinearClassifier':
        """Same decision rule with ||w|| = 1."""
        norm = np.linalg.norm(self.w)
        if norm == 0:
            return self
        return LinearClassifier(self.w / norm, self.b / norm, self.alpha, self.method)

    def to_dict(self) -> dict:
        return {
            'w': self.w.tolist(),
            'b': self.b,
            'alpha': self.alpha,
            'method': self.method,
        }


@dataclass(frozen=True)
class ClassEpochStats:
    """
    Per-epoch and pooled class moments.

    Attributes:
        epoch_means: epoch_means[i][j] is the mean of class j+1 in epoch i
        epoch_covs: matching covariances
        pooled_means: pooled_means[j] over the union of epochs
        pooled_covs: matching covariances
    """
    epoch_means: List[List[np.ndarray]]
    epoch_covs: List[List[np.ndarray]]
    pooled_means: List[np.ndarray]
    pooled_covs: List[np.ndarray]

    @property
    def n_epochs(self) -> int:
        return len(self.epoch_means)

    @property
    def dim(self) -> int:
        return self.pooled_means[0].shape[0]

    @property
    def mean_difference(self) -> np.ndarray:
        return self.pooled_means[0] - self.pooled_means[1]

    @property
    def summed_cov(self) -> np.ndarray:
        return self.pooled_covs[0] + self.pooled_covs[1]


@dataclass(frozen=True)
class TradeoffConfig:
    """
    Settings for the gradient classifier family and alpha selection.

    Attributes:
        alpha_grid: Candidate trade-off parameters in [0, 1]
        k_folds: Cross-validation folds
        n_epochs: Contiguous epochs when the data carries no epoch ids
        seed: Seed for restarts and fold assignment
        restarts: Random restarts of the sphere ascent
        phi_form: "kl" (zero at equality) or "verbatim" (displayed coefficients)
        bias_convention: "midpoint" (b = -w^T(mu1+mu2)/2) or "verbatim" (no 1/2)
    """
    alpha_grid: Sequence[float] = (0.1, 0.5, 1.0)
    k_folds: int = 5
    n_epochs: int = SLDA_EPOCHS
    seed: int = 0
    restarts: int = SLDA_RESTARTS
    phi_form: str = "kl"
    bias_convention: str = "midpoint"

    def __post_init__(self):
        grid = tuple(float(a) for a in self.alpha_grid)
        if not grid:
            raise InvalidArgument("alpha grid must be nonempty")
        if any(a < 0 or a > 1 for a in grid):
            raise InvalidArgument("alpha values must lie in [0, 1]")
        if self.k_folds < 2:
            raise InvalidArgument("k_folds must be at least 2")
        if self.restarts < 1:
            raise InvalidArgument("restarts must be at least 1")
        if self.phi_form not in ("kl", "verbatim"):
            raise InvalidArgument("phi_form must be 'kl' or 'verbatim'")
        if self.bias_convention not in ("midpoint", "verbatim"):
            raise InvalidArgument("bias_convention must be 'midpoint' or 'verbatim'")
        object.__setattr__(self, 'alpha_grid', grid)
