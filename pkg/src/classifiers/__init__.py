"""Two-class linear classifiers."""
from .epoch_stats import build_class_epoch_stats, contiguous_epoch_ids, with_epoch_ids
from .lda import fisher_ratio, lda_from_moments, lda_train, rlda_train
from .slda import (
    cross_validate_alpha,
    grad_lda_train,
    phi_ns,
    phi_ns_gradient,
    rand_lda_train,
    random_penalty_matrix,
    slda_cv_train,
    slda_gradient,
    slda_loss,
    slda_train,
    stationarity_penalty,
)
from .sphere_ascent import SphereAscentResult, ascend, ascend_with_restarts
from .trainer import METHODS, train_classifier

__all__ = [
    'build_class_epoch_stats',
    'contiguous_epoch_ids',
    'with_epoch_ids',
    'fisher_ratio',
    'lda_from_moments',
    'lda_train',
    'rlda_train',
    'cross_validate_alpha',
    'grad_lda_train',
    'phi_ns',
    'phi_ns_gradient',
    'rand_lda_train',
    'random_penalty_matrix',
    'slda_cv_train',
    'slda_gradient',
    'slda_loss',
    'slda_train',
    'stationarity_penalty',
    'SphereAscentResult',
    'ascend',
    'ascend_with_restarts',
    'METHODS',
    'train_classifier',
]
