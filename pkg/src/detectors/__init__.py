"""Change-point detectors."""
from .linkage import single_linkage_cluster
from .slcd import slcd_detect, epoch_distance_matrix
from .cusum import cusum_weighted, cusum_scan
from .kohlmorgen_lemm import (
    kl_window_distance,
    kl_sigma_heuristic,
    window_distance_matrix,
    viterbi_states,
    kohlmorgen_lemm,
)
from .base_detector import (
    ChangePointDetector,
    SlcdDetector,
    CusumDetector,
    KohlmorgenLemmDetector,
    create_detector,
)

__all__ = [
    'single_linkage_cluster',
    'slcd_detect',
    'epoch_distance_matrix',
    'cusum_weighted',
    'cusum_scan',
    'kl_window_distance',
    'kl_sigma_heuristic',
    'window_distance_matrix',
    'viterbi_states',
    'kohlmorgen_lemm',
    'ChangePointDetector',
    'SlcdDetector',
    'CusumDetector',
    'KohlmorgenLemmDetector',
    'create_detector',
]
