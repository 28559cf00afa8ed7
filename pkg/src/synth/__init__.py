"""Seeded synthetic data generators."""
from .rng import Stream, make_rng, random_orthogonal, random_orthogonal_matrix
from .cpd_generator import gen_covariances, gen_cpd_dataset, markov_states, variance_grid
from .classif_generator import gen_classif_dataset, marginalized_mean_samples

__all__ = [
    'Stream',
    'make_rng',
    'random_orthogonal',
    'random_orthogonal_matrix',
    'gen_covariances',
    'gen_cpd_dataset',
    'markov_states',
    'variance_grid',
    'gen_classif_dataset',
    'marginalized_mean_samples',
]
