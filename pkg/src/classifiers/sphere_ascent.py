"""Projected gradient ascent on the unit sphere."""
import logging
from dataclasses import dataclass
from typing import Callable

import numpy as np

from ..config.settings import (
    ARMIJO_CONTRACTION,
    ARMIJO_MAX_HALVINGS,
    ARMIJO_SLOPE,
    SLDA_MAX_ITERATIONS,
    SLDA_TOLERANCE,
)
from ..synth.rng import Stream, make_rng

logger = logging.getLogger(__name__)

TIE_TOLERANCE = 1e-12


@dataclass
class SphereAscentResult:
    direction: np.ndarray
    value: float
    iterations: int
    converged: bool
    stalled: bool = False


def _unit(vector: np.ndarray) -> np.ndarray:
    return vector / np.linalg.norm(vector)


def ascend(objective: Callable[[np.ndarray], float],
           gradient: Callable[[np.ndarray], np.ndarray],
           start: np.ndarray,
           max_iterations: int = SLDA_MAX_ITERATIONS,
           tolerance: float = SLDA_TOLERANCE) -> SphereAscentResult:
    """
    Maximize f(w) subject to ||w|| = 1.

    The gradient is projected onto the tangent space at w, a step is taken along
    it and the result renormalized; the step length backtracks from 1 until the
    Armijo condition holds.
    """
    w = _unit(np.asarray(start, dtype=float))
    value = objective(w)
    iteration = 0
    converged = False
    stalled = False

    for iteration in range(1, max_iterations + 1):
        raw = gradient(w)
        tangent = raw - (w @ raw) * w
        slope = float(tangent @ tangent)
        if np.sqrt(slope) < tolerance:
            converged = True
            iteration -= 1
            break

        step = 1.0
        accepted = False
        for _ in range(ARMIJO_MAX_HALVINGS):
            candidate = _unit(w + step * tangent)
            try:
                candidate_value = objective(candidate)
            except ArithmeticError:
                candidate_value = -np.inf
            if candidate_value >= value + ARMIJO_SLOPE * step * slope:
                accepted = True
                break
            step *= ARMIJO_CONTRACTION

        if not accepted:
            stalled = True
            iteration -= 1
            break
        improvement = candidate_value - value
        w, value = candidate, candidate_value
        if improvement < tolerance ** 2:
            converged = True
            break

    return SphereAscentResult(direction=w, value=value, iterations=iteration,
                              converged=converged, stalled=stalled)


def ascend_with_restarts(objective: Callable[[np.ndarray], float],
                         gradient: Callable[[np.ndarray], np.ndarray],
                         dim: int,
                         restarts: int,
                         seed: int,
                         max_iterations: int = SLDA_MAX_ITERATIONS,
                         tolerance: float = SLDA_TOLERANCE) -> SphereAscentResult:
    """
    Best of several ascents from random unit vectors.

    Restart r starts from stream (seed, SLDA_RESTART, r). Values within 1e-12 of
    the best so far keep the earlier restart.
    """
    best = None
    for restart in range(restarts):
        start = make_rng(seed, Stream.SLDA_RESTART, restart).standard_normal(dim)
        result = ascend(objective, gradient, start, max_iterations, tolerance)
        logger.debug(f"sphere restart {restart}: value {result.value:.10g} "
                     f"after {result.iterations} iterations")
        if best is None or result.value > best.value + TIE_TOLERANCE:
            best = result
    return best
