"""
Gradient-trained linear discriminants with a stationarity trade-off.

The trade-off objective on the unit sphere is

    L(w) = alpha * sqrt(F(w)) - (1 - alpha) * P(w)

where F is the Fisher ratio on pooled class moments and P is a penalty: the
summed per-epoch divergence from the pooled class moments for sLDA, a random
quadratic form for randLDA, and nothing for gradLDA (alpha = 1).
"""
import logging
import math
from typing import Callable, Dict, Optional, Tuple

import numpy as np
from sklearn.model_selection import StratifiedKFold

from ..config.settings import VARIANCE_FLOOR
from ..exceptions import DegenerateVariance, InvalidArgument
from ..models.classifier import ClassEpochStats, LinearClassifier, TradeoffConfig
from ..models.time_series import TimeSeries
from ..synth.rng import Stream, make_rng
from .epoch_stats import build_class_epoch_stats, with_epoch_ids
from .sphere_ascent import ascend_with_restarts

logger = logging.getLogger(__name__)

Moments = Tuple[np.ndarray, np.ndarray]
Trainer = Callable[[TimeSeries, float], LinearClassifier]

TIE_TOLERANCE = 1e-12


def _projected_variance(w: np.ndarray, cov: np.ndarray) -> float:
    variance = float(w @ cov @ w)
    if variance <= VARIANCE_FLOOR:
        raise DegenerateVariance(f"projected variance {variance:.3e} is not positive")
    return variance


def phi_ns(w: np.ndarray, epoch: Moments, pooled: Moments, form: str = "kl") -> float:
    """
    Divergence of one projected epoch Gaussian from the projected pooled Gaussian.

    With m = w^T (mu_i - mu), p = w^T S w and r = w^T S_i w / p the "kl" form is
    m^2 / (2p) + (r - 1 - log r) / 2, which vanishes exactly when the projected
    moments agree. The "verbatim" form m^2 / (2p) + r / 2 - 1 - log r is offset by
    -1/2 at equality.
    """
    epoch_mean, epoch_cov = epoch
    pooled_mean, pooled_cov = pooled
    p = _projected_variance(w, pooled_cov)
    r = _projected_variance(w, epoch_cov) / p
    m = float(w @ (epoch_mean - pooled_mean))
    if form == "kl":
        return m * m / (2.0 * p) + 0.5 * (r - 1.0 - math.log(r))
    if form == "verbatim":
        return m * m / (2.0 * p) + 0.5 * r - 1.0 - math.log(r)
    raise InvalidArgument(f"unknown divergence form: {form}")


def phi_ns_gradient(w: np.ndarray, epoch: Moments, pooled: Moments, form: str = "kl") -> np.ndarray:
    epoch_mean, epoch_cov = epoch
    pooled_mean, pooled_cov = pooled
    pooled_w = pooled_cov @ w
    epoch_w = epoch_cov @ w
    p = _projected_variance(w, pooled_cov)
    r = _projected_variance(w, epoch_cov) / p
    delta = epoch_mean - pooled_mean
    m = float(w @ delta)

    mean_part = m * delta / p - m * m * pooled_w / p ** 2
    ratio_gradient = 2.0 * (epoch_w - r * pooled_w) / p
    if form == "kl":
        return mean_part + 0.5 * (1.0 - 1.0 / r) * ratio_gradient
    if form == "verbatim":
        return mean_part + (0.5 - 1.0 / r) * ratio_gradient
    raise InvalidArgument(f"unknown divergence form: {form}")


def _epoch_pairs(stats: ClassEpochStats):
    for i in range(stats.n_epochs):
        for j in range(2):
            yield ((stats.epoch_means[i][j], stats.epoch_covs[i][j]),
                   (stats.pooled_means[j], stats.pooled_covs[j]))


def stationarity_penalty(w: np.ndarray, stats: ClassEpochStats, form: str = "kl") -> float:
    """Sum of phi_ns over epochs and classes."""
    return sum(phi_ns(w, epoch, pooled, form) for epoch, pooled in _epoch_pairs(stats))


def stationarity_penalty_gradient(w: np.ndarray, stats: ClassEpochStats, form: str = "kl") -> np.ndarray:
    gradient = np.zeros_like(w, dtype=float)
    for epoch, pooled in _epoch_pairs(stats):
        gradient += phi_ns_gradient(w, epoch, pooled, form)
    return gradient


def root_fisher(w: np.ndarray, stats: ClassEpochStats) -> float:
    """|w^T (m1 - m2)| / sqrt(w^T (S1 + S2) w)."""
    return abs(float(w @ stats.mean_difference)) / math.sqrt(_projected_variance(w, stats.summed_cov))


def root_fisher_gradient(w: np.ndarray, stats: ClassEpochStats) -> np.ndarray:
    summed_w = stats.summed_cov @ w
    spread = _projected_variance(w, stats.summed_cov)
    gap = float(w @ stats.mean_difference)
    return (np.sign(gap) * stats.mean_difference / math.sqrt(spread)
            - abs(gap) * summed_w / spread ** 1.5)


def slda_loss(w: np.ndarray, alpha: float, stats: ClassEpochStats, form: str = "kl") -> float:
    """alpha * sqrt(Fisher ratio) minus (1 - alpha) times the stationarity penalty."""
    w = np.asarray(w, dtype=float)
    value = alpha * root_fisher(w, stats)
    if alpha < 1.0:
        value -= (1.0 - alpha) * stationarity_penalty(w, stats, form)
    return value


def slda_gradient(w: np.ndarray, alpha: float, stats: ClassEpochStats, form: str = "kl") -> np.ndarray:
    """Euclidean gradient of slda_loss."""
    w = np.asarray(w, dtype=float)
    gradient = alpha * root_fisher_gradient(w, stats)
    if alpha < 1.0:
        gradient = gradient - (1.0 - alpha) * stationarity_penalty_gradient(w, stats, form)
    return gradient


def _oriented_classifier(w: np.ndarray, stats: ClassEpochStats, cfg: TradeoffConfig,
                         alpha: float, method: str) -> LinearClassifier:
    if float(w @ stats.mean_difference) < 0:
        w = -w
    midpoint_sum = float(w @ (stats.pooled_means[0] + stats.pooled_means[1]))
    b = -0.5 * midpoint_sum if cfg.bias_convention == "midpoint" else -midpoint_sum
    return LinearClassifier(w=w, b=b, alpha=alpha, method=method)


def _train_tradeoff(stats: ClassEpochStats, alpha: float, cfg: TradeoffConfig, method: str,
                    penalty: Optional[Callable[[np.ndarray], float]] = None,
                    penalty_gradient: Optional[Callable[[np.ndarray], np.ndarray]] = None,
                    ) -> LinearClassifier:
    if not 0.0 <= alpha <= 1.0:
        raise InvalidArgument(f"alpha must lie in [0, 1], got {alpha}")
    use_penalty = penalty is not None and alpha < 1.0

    def objective(w):
        value = alpha * root_fisher(w, stats)
        return value - (1.0 - alpha) * penalty(w) if use_penalty else value

    def gradient(w):
        grad = alpha * root_fisher_gradient(w, stats)
        return grad - (1.0 - alpha) * penalty_gradient(w) if use_penalty else grad

    best = ascend_with_restarts(objective, gradient, stats.dim, cfg.restarts, cfg.seed)
    logger.debug(f"{method} alpha={alpha:g}: objective {best.value:.8g}")
    return _oriented_classifier(best.direction, stats, cfg, alpha, method)


def slda_train(data: TimeSeries, alpha: float, cfg: TradeoffConfig) -> LinearClassifier:
    """
    Train sLDA at a fixed trade-off alpha.

    Epochs come from data.epoch_ids or cfg.n_epochs contiguous blocks. The
    direction is the best of cfg.restarts sphere ascents, oriented so that class 1
    projects above class 2.
    """
    stats = build_class_epoch_stats(data, cfg.n_epochs)
    return _train_tradeoff(
        stats, alpha, cfg, "slda",
        penalty=lambda w: stationarity_penalty(w, stats, cfg.phi_form),
        penalty_gradient=lambda w: stationarity_penalty_gradient(w, stats, cfg.phi_form),
    )


def grad_lda_train(data: TimeSeries, cfg: TradeoffConfig) -> LinearClassifier:
    """Sphere ascent on the Fisher ratio alone."""
    stats = build_class_epoch_stats(TimeSeries(data=data.data, labels=data.labels), n_epochs=1)
    return _train_tradeoff(stats, 1.0, cfg, "gradlda")


def random_penalty_matrix(dim: int, seed: int) -> np.ndarray:
    """D x D matrix with entries uniform on [0, 1]."""
    return make_rng(seed, Stream.RAND_LDA_PENALTY, 0).uniform(0.0, 1.0, size=(dim, dim))


def rand_lda_train(data: TimeSeries, alpha: float, seed: int, cfg: TradeoffConfig) -> LinearClassifier:
    """Trade-off training with the random quadratic penalty w^T R w, R fixed by seed."""
    stats = build_class_epoch_stats(TimeSeries(data=data.data, labels=data.labels), n_epochs=1)
    penalty_matrix = random_penalty_matrix(stats.dim, seed)
    symmetric = penalty_matrix + penalty_matrix.T
    return _train_tradeoff(
        stats, alpha, cfg, "randlda",
        penalty=lambda w: float(w @ penalty_matrix @ w),
        penalty_gradient=lambda w: symmetric @ w,
    )


def _fold_keys(data: TimeSeries) -> np.ndarray:
    """Stratification keys combining epoch and class so each fold sees every epoch."""
    _, epoch_index = np.unique(data.epoch_ids, return_inverse=True)
    return 2 * epoch_index + (data.labels - 1)


def cross_validate_alpha(data: TimeSeries, cfg: TradeoffConfig,
                         trainer: Trainer) -> Tuple[float, Dict[float, float]]:
    """
    Mean held-out error of every alpha in cfg.alpha_grid.

    Returns:
        (chosen alpha, {alpha: mean error}); ties go to the larger alpha
    """
    data = with_epoch_ids(data, cfg.n_epochs)
    fold_seed = int(make_rng(cfg.seed, Stream.CV_FOLDS, 0).integers(2 ** 31 - 1))
    folds = StratifiedKFold(n_splits=cfg.k_folds, shuffle=True, random_state=fold_seed)
    splits = list(folds.split(data.data.T, _fold_keys(data)))

    errors = {}
    for alpha in cfg.alpha_grid:
        fold_errors = []
        for train_index, test_index in splits:
            classifier = trainer(data.subset(train_index), alpha)
            test = data.subset(test_index)
            fold_errors.append(classifier.error_rate(test.data.T, test.labels))
        errors[alpha] = float(np.mean(fold_errors))
        logger.debug(f"alpha={alpha:g}: CV error {errors[alpha]:.4f}")

    chosen = None
    for alpha in sorted(errors, reverse=True):
        if chosen is None or errors[alpha] < errors[chosen] - TIE_TOLERANCE:
            chosen = alpha
    return chosen, errors


def slda_cv_train(data: TimeSeries, cfg: TradeoffConfig,
                  trainer: Optional[Trainer] = None) -> Tuple[LinearClassifier, float]:
    """
    Choose alpha by stratified k-fold cross-validation, then retrain on all data.

    A single-valued grid skips cross-validation.
    """
    trainer = trainer or (lambda train, alpha: slda_train(train, alpha, cfg))
    if len(cfg.alpha_grid) == 1:
        alpha = cfg.alpha_grid[0]
    else:
        alpha, errors = cross_validate_alpha(data, cfg, trainer)
        logger.info(f"Selected alpha={alpha:g} from "
                    + ", ".join(f"{a:g}: {e:.3f}" for a, e in errors.items()))
    return trainer(with_epoch_ids(data, cfg.n_epochs), alpha), alpha
