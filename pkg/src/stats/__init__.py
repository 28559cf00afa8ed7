"""Moment estimation, whitening and Gaussian divergences."""
from .moments import (
    partition_epochs,
    partition_from_ids,
    sample_stats,
    epoch_moments,
    average_epoch,
    whiten,
)
from .divergence import kl_gauss, symmetrized_kl, pairwise_symmetrized_kl
from .shrinkage import shrinkage_cov

__all__ = [
    'partition_epochs',
    'partition_from_ids',
    'sample_stats',
    'epoch_moments',
    'average_epoch',
    'whiten',
    'kl_gauss',
    'symmetrized_kl',
    'pairwise_symmetrized_kl',
    'shrinkage_cov',
]
