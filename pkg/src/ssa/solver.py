"""Stationary and most non-stationary subspace searches."""
import logging
from typing import Callable, Optional, Sequence

import numpy as np

from ..exceptions import InvalidDimension
from ..models.projection import Projection, ProjectionKind, SsaConfig, SsaSolution
from ..models.time_series import EpochStats, TimeSeries
from ..stats.moments import epoch_moments, partition_epochs, whiten
from ..synth.rng import Stream, make_rng, random_orthogonal_matrix
from .objective import SsaObjective
from .orthogonal_optimizer import RotationSearch

logger = logging.getLogger(__name__)

TIE_TOLERANCE = 1e-12


def optimize_projection(
    stats: Sequence[EpochStats],
    d: int,
    maximize: bool,
    cfg: SsaConfig,
    callback: Optional[Callable[[np.ndarray, float], None]] = None,
) -> SsaSolution:
    """
    Best of cfg.n_restarts rotation searches on precomputed epoch moments.

    Args:
        stats: Epoch moments, normally of average-epoch whitened data
        d: Rows of the projection
        maximize: Search for the most non-stationary projection
        cfg: Optimizer settings; restart r draws its start from stream (seed, SSA_RESTART, r)
        callback: Passed through to every RotationSearch

    Returns:
        SsaSolution without a whitening transform
    """
    objective = SsaObjective(stats)
    D = objective.dim
    if not 1 <= d < D:
        raise InvalidDimension(f"projection dimension must satisfy 1 <= d < D={D}, got {d}")

    search = RotationSearch(
        loss=objective.value,
        gradient=objective.gradient,
        d=d,
        maximize=maximize,
        max_iterations=cfg.max_iterations,
        gradient_tolerance=cfg.gradient_tolerance,
        callback=callback,
    )

    best = None
    per_restart = []
    for restart in range(cfg.n_restarts):
        start = random_orthogonal_matrix(D, make_rng(cfg.seed, Stream.SSA_RESTART, restart))
        result = search.run(start)
        per_restart.append(result.loss)
        status = "" if result.converged else " (line search stalled)" if result.stalled else " (budget exhausted)"
        logger.debug(f"restart {restart}: loss {result.loss:.10g} after {result.iterations} iterations{status}")
        if best is None:
            best = result
        elif maximize and result.loss > best.loss + TIE_TOLERANCE:
            best = result
        elif not maximize and result.loss < best.loss - TIE_TOLERANCE:
            best = result

    kind = ProjectionKind.NONSTATIONARY if maximize else ProjectionKind.STATIONARY
    projection = Projection(best.rotation[:d], kind)
    return SsaSolution(
        projection=projection,
        loss=objective.value(projection.matrix),
        per_restart_losses=per_restart,
        iterations_used=best.iterations,
        rotation=best.rotation,
    )


def _search(ts: TimeSeries, d: int, cfg: SsaConfig, maximize: bool) -> SsaSolution:
    if not 1 <= d < ts.dim:
        raise InvalidDimension(f"projection dimension must satisfy 1 <= d < D={ts.dim}, got {d}")
    part = partition_epochs(ts, cfg.n_epochs)
    white, transform = whiten(ts, part)
    stats = epoch_moments(white, part)
    solution = optimize_projection(stats, d, maximize, cfg)
    logger.info(
        f"{'Most non-stationary' if maximize else 'Stationary'} {d}-dim projection: "
        f"loss {solution.loss:.6g} (restarts {', '.join(f'{l:.4g}' for l in solution.per_restart_losses)})"
    )
    return SsaSolution(
        projection=solution.projection,
        loss=solution.loss,
        per_restart_losses=solution.per_restart_losses,
        iterations_used=solution.iterations_used,
        rotation=solution.rotation,
        whitening=transform,
    )


def find_stationary(ts: TimeSeries, d_s: int, cfg: SsaConfig) -> SsaSolution:
    """
    Projection onto the d_s most stationary directions.

    The series is split into cfg.n_epochs epochs and whitened against the average
    epoch before the loss is minimized over orthonormal projections.
    """
    return _search(ts, d_s, cfg, maximize=False)


def find_most_nonstationary(ts: TimeSeries, d_n: int, cfg: SsaConfig) -> SsaSolution:
    """Projection onto the d_n directions that maximize the SSA loss."""
    return _search(ts, d_n, cfg, maximize=True)


def random_projection(D: int, d: int, seed: int) -> Projection:
    """Rotation-invariant random d x D projection."""
    if not 1 <= d <= D:
        raise InvalidDimension(f"random projection needs 1 <= d <= D, got d={d}, D={D}")
    rotation = random_orthogonal_matrix(D, make_rng(seed, Stream.RANDOM_PROJECTION, 0))
    return Projection(rotation[:d], ProjectionKind.RANDOM)
