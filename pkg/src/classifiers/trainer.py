"""Method-name dispatch over every classifier trainer."""
import logging
from typing import Optional, Tuple, Union

from ..exceptions import InvalidArgument
from ..models.classifier import LinearClassifier, TradeoffConfig
from ..models.time_series import TimeSeries
from .lda import lda_train, rlda_train
from .slda import grad_lda_train, rand_lda_train, slda_cv_train, slda_train

logger = logging.getLogger(__name__)

METHODS = ("lda", "rlda", "gradlda", "slda", "randlda")


def _train_lda(data, cfg, alpha, gamma, seed):
    return lda_train(data.class_samples(1), data.class_samples(2)), None


def _train_rlda(data, cfg, alpha, gamma, seed):
    return rlda_train(data.class_samples(1), data.class_samples(2), gamma), None


def _train_gradlda(data, cfg, alpha, gamma, seed):
    return grad_lda_train(data, cfg), 1.0


def _train_slda(data, cfg, alpha, gamma, seed):
    if alpha is not None:
        return slda_train(data, alpha, cfg), alpha
    return slda_cv_train(data, cfg)


def _train_randlda(data, cfg, alpha, gamma, seed):
    if alpha is not None:
        return rand_lda_train(data, alpha, seed, cfg), alpha
    return slda_cv_train(data, cfg, trainer=lambda train, a: rand_lda_train(train, a, seed, cfg))


def train_classifier(
    method: str,
    data: TimeSeries,
    cfg: Optional[TradeoffConfig] = None,
    alpha: Optional[float] = None,
    gamma: Union[float, str] = "auto",
    seed: int = 0,
) -> Tuple[LinearClassifier, Optional[float]]:
    """
    Train a classifier by method name.

    Args:
        method: One of METHODS
        data: Labeled training series
        cfg: Trade-off settings for the gradient family
        alpha: Fixed trade-off; None selects it by cross-validation over cfg.alpha_grid
        gamma: Shrinkage intensity for rlda
        seed: Penalty seed for randlda

    Returns:
        (classifier, alpha used or None for the closed forms)

    Raises:
        InvalidArgument: If the method is not supported
    """
    trainer_map = {
        'lda': _train_lda,
        'rlda': _train_rlda,
        'gradlda': _train_gradlda,
        'slda': _train_slda,
        'randlda': _train_randlda,
    }
    trainer = trainer_map.get(method)
    if not trainer:
        supported = ', '.join(trainer_map.keys())
        raise InvalidArgument(f"Unsupported method: {method}. Supported methods: {supported}")
    if not data.is_labeled:
        raise InvalidArgument("training data must carry labels")

    classifier, chosen = trainer(data, cfg or TradeoffConfig(), alpha, gamma, seed)
    logger.debug(f"Trained {method} (alpha={chosen})")
    return classifier, chosen
