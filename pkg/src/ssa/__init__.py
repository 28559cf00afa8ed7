"""Stationary subspace searches on the orthogonal group."""
from .objective import SsaObjective, ssa_loss, ssa_loss_gradient
from .orthogonal_optimizer import RotationSearch, RotationSearchResult
from .solver import (
    optimize_projection,
    find_stationary,
    find_most_nonstationary,
    random_projection,
)

__all__ = [
    'SsaObjective',
    'ssa_loss',
    'ssa_loss_gradient',
    'RotationSearch',
    'RotationSearchResult',
    'optimize_projection',
    'find_stationary',
    'find_most_nonstationary',
    'random_projection',
]
