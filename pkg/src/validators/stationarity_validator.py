"""Likelihood-ratio test for stationarity and stationary-dimension selection."""
import logging
from typing import Sequence

import numpy as np
from scipy.stats import chi2

from ..config.settings import P_THRESHOLD
from ..exceptions import DimensionMismatch, DomainError, InvalidArgument, SingularCovariance
from ..models.projection import SsaConfig
from ..models.test_results import DsSelection, LrTestResult
from ..models.time_series import EpochStats, TimeSeries
from ..ssa.solver import optimize_projection
from ..stats.moments import epoch_moments, partition_epochs, whiten

logger = logging.getLogger(__name__)

CONSTANT_FORMS = ("derived", "displayed")


def lr_statistic(stats: Sequence[EpochStats], d: int, constant: str = "derived") -> float:
    """
    Likelihood-ratio statistic of the standardized-stationary null.

    sum_i N_i * (-log det S_i + ||m_i||^2 + tr S_i) - d * M, with M = sum_i N_i.

    Args:
        stats: Epoch moments of the projected (whitened) sources
        d: Dimension of the projected sources
        constant: "derived" subtracts d * M so the exact null gives 0;
            "displayed" subtracts d * n_epochs instead

    Returns:
        The statistic Lambda
    """
    if constant not in CONSTANT_FORMS:
        raise InvalidArgument(f"constant must be one of {CONSTANT_FORMS}")
    if not stats:
        raise InvalidArgument("need at least one epoch")

    total = 0.0
    samples = 0
    for s in stats:
        if s.dim != d:
            raise DimensionMismatch(f"epoch moments have dimension {s.dim}, expected {d}")
        sign, logdet = np.linalg.slogdet(s.cov)
        if sign <= 0:
            raise SingularCovariance("projected epoch covariance is singular")
        total += s.count * (-logdet + float(s.mean @ s.mean) + float(np.trace(s.cov)))
        samples += s.count

    offset = d * samples if constant == "derived" else d * len(stats)
    return float(total - offset)


def dof(n_epochs: int, d_n: int) -> int:
    """Degrees of freedom N * d * (d + 3) / 2 of the chi-square reference."""
    if n_epochs < 1 or d_n < 1:
        raise InvalidArgument("n_epochs and d must be positive")
    return n_epochs * d_n * (d_n + 3) // 2


def chi2_sf(x: float, k: int) -> float:
    """Chi-square survival function, the regularized upper incomplete gamma Q(k/2, x/2)."""
    if x < 0 or not np.isfinite(x):
        raise DomainError(f"chi-square survival needs a finite x >= 0, got {x}")
    if k < 1:
        raise DomainError(f"degrees of freedom must be positive, got {k}")
    return float(min(max(chi2.sf(x, k), 0.0), 1.0))


def lr_test(stats: Sequence[EpochStats], d: int, constant: str = "derived") -> LrTestResult:
    """Statistic, degrees of freedom and p-value for one set of projected epochs."""
    statistic = max(lr_statistic(stats, d, constant), 0.0)
    degrees = dof(len(stats), d)
    return LrTestResult(statistic=statistic, dof=degrees, p_value=chi2_sf(statistic, degrees))


def select_ds(ts: TimeSeries, cfg: SsaConfig, p_threshold: float = P_THRESHOLD) -> DsSelection:
    """
    Choose the number of stationary sources.

    For every d_s in 1..D-1 the stationary projection is estimated and the
    likelihood-ratio test is applied to the estimated sources. The chosen d_s is the
    largest one whose p-value reaches p_threshold, or 0 if none does.

    Args:
        ts: Input series
        cfg: Optimizer and epoch settings
        p_threshold: Significance level in [0, 1)

    Returns:
        DsSelection with every tested d_s
    """
    if not 0.0 <= p_threshold < 1.0:
        raise InvalidArgument(f"p_threshold must lie in [0, 1), got {p_threshold}")
    if ts.dim < 2:
        raise InvalidArgument("dimension selection needs at least two channels")

    part = partition_epochs(ts, cfg.n_epochs)
    white, _ = whiten(ts, part)
    stats = epoch_moments(white, part)

    per_ds = []
    results = []
    for d_s in range(1, ts.dim):
        solution = optimize_projection(stats, d_s, maximize=False, cfg=cfg)
        projected = [s.project(solution.projection.matrix) for s in stats]
        result = lr_test(projected, d_s)
        per_ds.append((d_s, result.p_value))
        results.append(result)
        logger.info(f"d_s={d_s}: Lambda={result.statistic:.4f}, dof={result.dof}, p={result.p_value:.4g}")

    accepted = [d_s for d_s, p in per_ds if p >= p_threshold]
    chosen = max(accepted) if accepted else 0
    logger.info(f"Chosen d_s = {chosen} at p >= {p_threshold}")
    return DsSelection(chosen_ds=chosen, per_ds_pvalues=per_ds, threshold=p_threshold, results=results)
