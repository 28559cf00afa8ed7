"""Principal angles between directions and subspaces."""
import math
from typing import Union

import numpy as np
from scipy.linalg import subspace_angles
from scipy.special import beta

from ..exceptions import DomainError, ZeroVector
from ..models.projection import Projection

Subspace = Union[np.ndarray, Projection]


def _basis(value: Subspace) -> np.ndarray:
    """Column basis: a vector is one column, a matrix or Projection spans its rows."""
    if isinstance(value, Projection):
        matrix = value.matrix.T
    else:
        array = np.asarray(value, dtype=float)
        matrix = array[:, np.newaxis] if array.ndim == 1 else array.T
    if not np.any(matrix):
        raise ZeroVector("cannot measure an angle to a zero vector")
    return matrix


def subspace_angle(u: Subspace, v: Subspace) -> float:
    """First (smallest) principal angle in radians, within [0, pi/2]."""
    angles = subspace_angles(_basis(u), _basis(v))
    return float(np.clip(np.min(angles), 0.0, math.pi / 2))


def subspace_angle_degrees(u: Subspace, v: Subspace) -> float:
    return math.degrees(subspace_angle(u, v))


def random_angle_density(theta: float, D: int) -> float:
    """
    Density sin^(D-2)(theta) / Z of the angle between a fixed and a uniformly
    random direction in D dimensions, Z being the integral over [0, pi/2].
    """
    if D < 2:
        raise DomainError("D must be at least 2")
    if not 0.0 <= theta <= math.pi / 2:
        raise DomainError("theta must lie in [0, pi/2]")
    power = D - 2
    normalizer = 0.5 * beta((power + 1) / 2.0, 0.5)
    return math.sin(theta) ** power / normalizer
