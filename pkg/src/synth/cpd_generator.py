"""Markov-switching mixtures of stationary and non-stationary Gaussian sources."""
import logging
from typing import List, Optional, Tuple

import numpy as np

from ..exceptions import InvalidArgument
from ..models.synth import MARKOV_STATES, CpdSynthSpec, GroundTruth, MarkovModelState
from ..models.time_series import TimeSeries
from .rng import Stream, make_rng, random_orthogonal_matrix

logger = logging.getLogger(__name__)


def variance_grid(q: float) -> np.ndarray:
    """Five log-spaced variances q^-1, q^-1/2, 1, q^1/2, q."""
    return np.power(float(q), np.linspace(-1.0, 1.0, MARKOV_STATES))


def gen_covariances(q: float, dim: int, seed: int = 0,
                    rng: Optional[np.random.Generator] = None) -> List[np.ndarray]:
    """
    Covariances of the five Markov models.

    Each is diagonal with entries drawn with replacement from variance_grid(q).

    Args:
        q: Power change, at least 1 (q = 1 gives identities)
        dim: Size of each matrix
        seed: Seed used when no generator is passed
        rng: Generator to draw from
    """
    if q < 1:
        raise InvalidArgument("q must be >= 1")
    rng = rng if rng is not None else make_rng(seed, Stream.CPD_GENERATOR, 0)
    grid = variance_grid(q)
    return [np.diag(grid[rng.integers(len(grid), size=dim)]) for _ in range(MARKOV_STATES)]


def markov_states(n_epochs: int, rng: np.random.Generator) -> List[int]:
    """Active model per epoch, starting from a uniformly drawn state."""
    chain = MarkovModelState(current=int(rng.integers(MARKOV_STATES)))
    states = [chain.current]
    for _ in range(n_epochs - 1):
        states.append(chain.step(rng))
    return states


def gen_cpd_dataset(spec: CpdSynthSpec) -> Tuple[TimeSeries, GroundTruth]:
    """
    Generate a mixed change-point dataset.

    Stationary sources are N(0, I) throughout. The non-stationary sources of each
    epoch follow N(0, Sigma_k) for the epoch's active model k. Sources, stationary
    first, are mixed by a random orthogonal matrix A; true change points are the
    epochs whose active model differs from the previous epoch's.
    """
    rng = make_rng(spec.seed, Stream.CPD_GENERATOR, 0)
    mixing = random_orthogonal_matrix(spec.D, rng)
    covariances = gen_covariances(spec.q, spec.d_n, rng=rng)
    states = markov_states(spec.n_epochs, rng)

    stationary = rng.standard_normal((spec.d_s, spec.length))
    # (d_n, n_epochs) standard deviations of the active model
    scales = np.stack([np.sqrt(np.diag(covariances[k])) for k in states], axis=1)
    nonstationary = rng.standard_normal((spec.d_n, spec.length)) * np.repeat(scales, spec.epoch_len, axis=1)
    sources = np.vstack([stationary, nonstationary])

    change_epochs = [i for i in range(1, spec.n_epochs) if states[i] != states[i - 1]]
    truth = GroundTruth(
        mixing=mixing,
        change_epochs=change_epochs,
        stationary_projection=mixing[:, :spec.d_s].T if spec.d_s else None,
        states=states,
    )
    logger.debug(f"Generated D={spec.D} (d_s={spec.d_s}, q={spec.q:g}) with "
                 f"{len(change_epochs)} change points over {spec.n_epochs} epochs")
    return TimeSeries(mixing @ sources), truth
