"""Single-linkage clustering change-point detection (SLCD)."""
import logging

from ..exceptions import InvalidK
from ..models.segmentation import DistanceMatrix, Segmentation
from ..models.time_series import TimeSeries
from ..stats.divergence import pairwise_symmetrized_kl
from ..stats.moments import epoch_moments, partition_epochs
from .linkage import single_linkage_cluster

logger = logging.getLogger(__name__)


def epoch_distance_matrix(ts: TimeSeries, n_epochs: int) -> DistanceMatrix:
    """Symmetrized Gaussian KL between the moments of every pair of epochs."""
    part = partition_epochs(ts, n_epochs)
    return pairwise_symmetrized_kl(epoch_moments(ts, part))


def segment_from_distances(dm: DistanceMatrix, k_clusters: int) -> Segmentation:
    """Cluster epochs at k and flag boundaries between differently labeled neighbours."""
    labels = single_linkage_cluster(dm, k_clusters)
    segmentation = Segmentation.from_labels(labels, algorithm="slcd", params={'k': k_clusters})
    scores = [float(dm.values[b - 1, b]) for b in segmentation.epoch_boundaries]
    return Segmentation(
        epoch_boundaries=segmentation.epoch_boundaries,
        n_epochs=segmentation.n_epochs,
        scores=scores,
        algorithm="slcd",
        params={'k': k_clusters, 'n_epochs': dm.n},
    )


def slcd_detect(ts: TimeSeries, n_epochs: int, k_clusters: int) -> Segmentation:
    """
    Segment a series by single-linkage clustering of its epochs.

    Args:
        ts: Input series
        n_epochs: Number of equal epochs
        k_clusters: Number of clusters, 1 <= k <= n_epochs

    Returns:
        Segmentation with a boundary wherever adjacent epochs fall in different clusters
    """
    if not 1 <= k_clusters <= n_epochs:
        raise InvalidK(f"k must satisfy 1 <= k <= n_epochs={n_epochs}, got {k_clusters}")
    if k_clusters == 1:
        return Segmentation([], n_epochs, scores=[], algorithm="slcd",
                            params={'k': 1, 'n_epochs': n_epochs})

    segmentation = segment_from_distances(epoch_distance_matrix(ts, n_epochs), k_clusters)
    logger.debug(f"SLCD k={k_clusters}: {len(segmentation.epoch_boundaries)} boundaries")
    return segmentation
