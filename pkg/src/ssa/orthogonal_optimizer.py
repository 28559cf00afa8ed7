"""Steepest descent on the orthogonal group with matrix-exponential updates."""
import logging
from dataclasses import dataclass, field
from typing import Callable, List, Optional

import numpy as np
from scipy.linalg import expm

from ..config.settings import ARMIJO_CONTRACTION, ARMIJO_MAX_HALVINGS, ARMIJO_SLOPE

logger = logging.getLogger(__name__)


@dataclass
class RotationSearchResult:
    """
    Final rotation of one descent run and its loss history.

    converged is set only when the gradient norm fell below tolerance; stalled marks
    a run whose line search found no acceptable step.
    """
    rotation: np.ndarray
    loss: float
    iterations: int
    converged: bool
    losses: List[float] = field(default_factory=list)
    stalled: bool = False


class RotationSearch:
    """
    Minimize or maximize f(R[:d]) over D x D orthogonal matrices R.

    Each step builds the antisymmetric generator K from the gradient, keeps only
    the blocks coupling the top d rows with the remaining rows (rotations inside
    either group leave the objective unchanged), and moves along the geodesic
    R <- expm(-t K) R with Armijo backtracking from t = 1.
    """

    def __init__(
        self,
        loss: Callable[[np.ndarray], float],
        gradient: Callable[[np.ndarray], np.ndarray],
        d: int,
        maximize: bool = False,
        max_iterations: int = 500,
        gradient_tolerance: float = 1e-6,
        callback: Optional[Callable[[np.ndarray, float], None]] = None,
    ):
        """
        Args:
            loss: Objective evaluated on a d x D matrix with orthonormal rows
            gradient: Euclidean gradient of the objective, d x D
            d: Number of rows that enter the objective
            maximize: Ascend instead of descend
            max_iterations: Iteration budget
            gradient_tolerance: Stop when the Riemannian gradient norm drops below this
            callback: Called with (rotation, loss) after every accepted step
        """
        self.loss = loss
        self.gradient = gradient
        self.d = d
        self.sign = -1.0 if maximize else 1.0
        self.max_iterations = max_iterations
        self.gradient_tolerance = gradient_tolerance
        self.callback = callback

    def generator(self, rotation: np.ndarray) -> np.ndarray:
        """Antisymmetric descent generator K at the given rotation."""
        d = self.d
        full_gradient = np.zeros_like(rotation)
        full_gradient[:d] = self.sign * self.gradient(rotation[:d])
        product = full_gradient @ rotation.T
        generator = product - product.T
        generator[:d, :d] = 0.0
        generator[d:, d:] = 0.0
        return generator

    def run(self, rotation: np.ndarray) -> RotationSearchResult:
        """Descend from an initial orthogonal matrix."""
        rotation = np.array(rotation, dtype=float)
        value = self.sign * self.loss(rotation[:self.d])
        losses = [self.sign * value]
        converged = False
        stalled = False
        iteration = 0

        for iteration in range(1, self.max_iterations + 1):
            generator = self.generator(rotation)
            grad_norm = np.linalg.norm(generator)
            if grad_norm < self.gradient_tolerance:
                converged = True
                iteration -= 1
                break

            # directional derivative along expm(-tK) R is -||K||^2 / 2
            slope = 0.5 * grad_norm ** 2
            step = 1.0
            accepted = False
            for _ in range(ARMIJO_MAX_HALVINGS):
                candidate = expm(-step * generator) @ rotation
                try:
                    candidate_value = self.sign * self.loss(candidate[:self.d])
                except ArithmeticError:
                    candidate_value = np.inf
                if candidate_value <= value - ARMIJO_SLOPE * step * slope:
                    accepted = True
                    break
                step *= ARMIJO_CONTRACTION

            if not accepted:
                logger.debug(f"Line search stalled at iteration {iteration}, gradient norm {grad_norm:.3e}")
                stalled = True
                iteration -= 1
                break

            rotation, value = candidate, candidate_value
            losses.append(self.sign * value)
            if self.callback is not None:
                self.callback(rotation, self.sign * value)
            logger.debug(f"iteration {iteration}: loss {self.sign * value:.10g}, step {step:.3g}")

        return RotationSearchResult(
            rotation=rotation,
            loss=self.sign * value,
            iterations=iteration,
            converged=converged,
            losses=losses,
            stalled=stalled,
        )
