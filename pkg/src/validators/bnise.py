"""Baseline-normalized integral stationary error."""
import logging
from dataclasses import dataclass
from typing import List

import numpy as np

from ..exceptions import DegenerateVariance, InvalidArgument, InvalidDimension
from ..models.projection import SsaConfig
from ..models.time_series import TimeSeries
from ..ssa.objective import ssa_loss
from ..ssa.solver import optimize_projection
from ..stats.moments import epoch_moments, partition_epochs, whiten
from ..synth.rng import Stream, make_rng

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class BniseReport:
    """Held-out losses, permutation baseline and z-score per stationary dimension."""
    dims: List[int]
    losses: List[float]
    baseline_mean: List[float]
    baseline_std: List[float]
    z_scores: List[float]

    @property
    def value(self) -> float:
        return float(np.sum(self.z_scores))

    def to_dict(self) -> dict:
        return {
            'bnise': self.value,
            'dims': list(self.dims),
            'losses': list(self.losses),
            'baseline_mean': list(self.baseline_mean),
            'baseline_std': list(self.baseline_std),
            'z_scores': list(self.z_scores),
        }


def held_out_losses(ts: TimeSeries, d: int, cfg: SsaConfig) -> np.ndarray:
    """
    SSA loss on the second half for stationary projections fitted on the first half.

    For each d' in 1..d the projection is estimated on the first half, applied to the
    second half, and the projected sources are standardized against their own average
    epoch before the loss is evaluated.
    """
    half = ts.length // 2
    train = ts.subset(np.arange(half))
    test = ts.subset(np.arange(half, ts.length))

    part = partition_epochs(train, cfg.n_epochs)
    white, transform = whiten(train, part)
    stats = epoch_moments(white, part)
    test_white = transform.apply(test.data)

    losses = []
    for d_prime in range(1, d + 1):
        solution = optimize_projection(stats, d_prime, maximize=False, cfg=cfg)
        sources = test.with_data(solution.projection.apply(test_white))
        test_part = partition_epochs(sources, cfg.n_epochs)
        standardized, _ = whiten(sources, test_part)
        test_stats = epoch_moments(standardized, test_part)
        losses.append(ssa_loss(np.eye(d_prime), test_stats))
    return np.array(losses)


def bnise_report(ts: TimeSeries, d: int, n_permutations: int, cfg: SsaConfig) -> BniseReport:
    """
    Held-out SSA losses normalized by a time-shuffled baseline.

    Shuffle p permutes the sample order with the stream (cfg.seed, BNISE_PERMUTATION, p),
    which destroys non-stationarity while keeping the marginal distribution.
    """
    if n_permutations < 2:
        raise InvalidArgument("need at least two permutations to estimate a baseline spread")
    if not 1 <= d < ts.dim:
        raise InvalidDimension(f"d must satisfy 1 <= d < D={ts.dim}, got {d}")

    observed = held_out_losses(ts, d, cfg)
    baseline = np.empty((n_permutations, d))
    for p in range(n_permutations):
        order = make_rng(cfg.seed, Stream.BNISE_PERMUTATION, p).permutation(ts.length)
        baseline[p] = held_out_losses(ts.subset(order), d, cfg)
        logger.debug(f"permutation {p}: losses {baseline[p]}")

    mean = baseline.mean(axis=0)
    std = baseline.std(axis=0, ddof=1)
    if np.any(std <= 0):
        raise DegenerateVariance("permutation baseline has zero spread")
    z_scores = (observed - mean) / std

    report = BniseReport(
        dims=list(range(1, d + 1)),
        losses=observed.tolist(),
        baseline_mean=mean.tolist(),
        baseline_std=std.tolist(),
        z_scores=z_scores.tolist(),
    )
    logger.info(f"BNISE(d={d}) = {report.value:.4f}")
    return report


def bnise(ts: TimeSeries, d: int, n_permutations: int, cfg: SsaConfig) -> float:
    """Sum over d' = 1..d of the z-scored held-out SSA loss."""
    return bnise_report(ts, d, n_permutations, cfg).value
