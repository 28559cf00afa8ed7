"""Seeded random streams and Haar-distributed orthogonal matrices.

Every random draw in the toolkit comes from a Philox counter-based generator keyed
by (seed, stream, index), so results are reproducible across platforms and
independent of the order in which parallel work items run.
"""
from enum import IntEnum

import numpy as np

from ..exceptions import InvalidArgument


class Stream(IntEnum):
    """Named random streams; one per consumer so draws never overlap."""
    CPD_GENERATOR = 1
    CLASSIF_GENERATOR = 2
    SSA_RESTART = 3
    RANDOM_PROJECTION = 4
    BNISE_PERMUTATION = 5
    SLDA_RESTART = 6
    CV_FOLDS = 7
    RAND_LDA_PENALTY = 8
    REALIZATION = 9
    OUTLIERS = 10


def make_rng(seed: int, stream: int = 0, index: int = 0) -> np.random.Generator:
    """
    Generator for one (seed, stream, index) triple.

    Args:
        seed: Non-negative base seed
        stream: Stream identifier, usually a Stream member
        index: Work item index within the stream (restart, realization, ...)
    """
    if seed < 0 or stream < 0 or index < 0:
        raise InvalidArgument("seed, stream and index must be non-negative")
    sequence = np.random.SeedSequence([int(seed), int(stream), int(index)])
    return np.random.Generator(np.random.Philox(sequence))


def random_orthogonal_matrix(dim: int, rng: np.random.Generator) -> np.ndarray:
    """Haar-distributed orthogonal matrix via QR of a Gaussian matrix with sign fix."""
    if dim < 1:
        raise InvalidArgument("dimension must be positive")
    gaussian = rng.standard_normal((dim, dim))
    q, r = np.linalg.qr(gaussian)
    signs = np.sign(np.diag(r))
    signs[signs == 0] = 1.0
    return q * signs


def random_orthogonal(dim: int, seed: int) -> np.ndarray:
    """Seeded Haar-distributed orthogonal matrix."""
    return random_orthogonal_matrix(dim, make_rng(seed, Stream.CPD_GENERATOR, 0))
