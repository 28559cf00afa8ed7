"""ROC, angle and experiment analytics."""
from .angles import random_angle_density, subspace_angle, subspace_angle_degrees
from .experiments import (
    best_channel_auc,
    map_ordered,
    modal_choice,
    preprocess,
    realization_seed,
    run_classif_experiment,
    run_cpd_experiment,
    run_p_values_experiment,
    summarize,
    sweep_auc,
)
from .roc import auc, rates, roc_from_sweep

__all__ = [
    'random_angle_density',
    'subspace_angle',
    'subspace_angle_degrees',
    'best_channel_auc',
    'map_ordered',
    'modal_choice',
    'preprocess',
    'realization_seed',
    'run_classif_experiment',
    'run_cpd_experiment',
    'run_p_values_experiment',
    'summarize',
    'sweep_auc',
    'auc',
    'rates',
    'roc_from_sweep',
]
