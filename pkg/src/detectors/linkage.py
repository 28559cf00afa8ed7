"""Single-linkage agglomerative clustering on a distance matrix."""
import numpy as np
from scipy.cluster.hierarchy import DisjointSet

from ..exceptions import InvalidK
from ..models.segmentation import DistanceMatrix


def single_linkage_cluster(dm: DistanceMatrix, k: int) -> np.ndarray:
    """
    Cut the single-linkage hierarchy at k clusters.

    Merging the closest pair of clusters repeatedly is the same as adding edges of
    the minimum spanning tree in increasing order, so edges are sorted by
    (distance, i, j) and joined with a union-find until k components remain. Ties
    between equal distances go to the lexicographically smallest pair.

    Args:
        dm: n x n distance matrix
        k: Number of clusters, 1 <= k <= n

    Returns:
        Length-n label array; labels are numbered in order of first appearance
    """
    n = dm.n
    if not 1 <= k <= n:
        raise InvalidK(f"k must satisfy 1 <= k <= {n}, got {k}")

    rows, cols = np.triu_indices(n, 1)
    distances = dm.values[rows, cols]
    order = np.lexsort((cols, rows, distances))

    components = DisjointSet(range(n))
    remaining = n
    for edge in order:
        if remaining == k:
            break
        if components.merge(int(rows[edge]), int(cols[edge])):
            remaining -= 1

    labels = np.empty(n, dtype=int)
    names = {}
    for i in range(n):
        root = components[i]
        labels[i] = names.setdefault(root, len(names))
    return labels
