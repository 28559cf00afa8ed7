"""Common interface for change-point detectors.

Each detector is parameterized by a trade-off value tau (the cluster count for
SLCD, the threshold for CUSUM and the switching penalty for Kohlmorgen/Lemm).
Sweeping tau traces an ROC curve, so detectors split their work into an
expensive tau-independent preparation and a cheap per-tau segmentation.
"""
import logging
from abc import ABC, abstractmethod
from typing import Any, Dict, List, Optional, Sequence

import numpy as np

from ..config.settings import VARIANCE_FLOOR
from ..exceptions import InvalidArgument
from ..models.segmentation import CusumParams, KlParams, Segmentation
from ..models.time_series import TimeSeries
from .cusum import cusum_weighted
from .kohlmorgen_lemm import resolve_sigma, segment_from_window_distances, window_distance_matrix
from .slcd import epoch_distance_matrix, segment_from_distances

logger = logging.getLogger(__name__)

# default CUSUM grid, relative to the first reference window's variance
CUSUM_GRID_FACTORS = np.linspace(0.2, 5.0, 49)


class ChangePointDetector(ABC):
    """Abstract base class for epoch-granular change-point detectors."""

    name: str = ""

    def __init__(self, epoch_len: int):
        """
        Args:
            epoch_len: Samples per evaluation epoch
        """
        if epoch_len < 2:
            raise InvalidArgument("epoch_len must be at least 2")
        self.epoch_len = epoch_len

    @abstractmethod
    def prepare(self, ts: TimeSeries) -> Any:
        """Tau-independent work for one series (distance matrices, ...)."""

    @abstractmethod
    def segment(self, prepared: Any, tau: float) -> Segmentation:
        """Segmentation of a prepared series at trade-off value tau."""

    def detect(self, ts: TimeSeries, tau: float) -> Segmentation:
        """Prepare and segment in one call."""
        return self.segment(self.prepare(ts), tau)

    def sweep(self, ts: TimeSeries, taus: Sequence[float]) -> List[Segmentation]:
        """Segmentations of one series for every tau."""
        prepared = self.prepare(ts)
        return [self.segment(prepared, tau) for tau in taus]

    def default_taus(self, prepared: Any) -> List[float]:
        """Default trade-off grid for ROC sweeps."""
        raise NotImplementedError


class SlcdDetector(ChangePointDetector):
    """Single-linkage clustering of epochs; tau is the cluster count k."""

    name = "slcd"

    def prepare(self, ts: TimeSeries):
        n_epochs = ts.length // self.epoch_len
        return epoch_distance_matrix(ts, n_epochs)

    def segment(self, prepared, tau: float) -> Segmentation:
        k = int(round(tau))
        if k == 1:
            return Segmentation([], prepared.n, scores=[], algorithm="slcd",
                                params={'k': 1, 'n_epochs': prepared.n})
        return segment_from_distances(prepared, k)

    def detect(self, ts: TimeSeries, tau: float) -> Segmentation:
        # one cluster needs no distances, so degenerate (e.g. constant) series still segment
        if int(round(tau)) == 1:
            n_epochs = ts.length // self.epoch_len
            return Segmentation([], n_epochs, scores=[], algorithm="slcd",
                                params={'k': 1, 'n_epochs': n_epochs})
        return super().detect(ts, tau)

    def default_taus(self, prepared) -> List[float]:
        return [float(k) for k in range(2, min(10, prepared.n) + 1)]


class CusumDetector(ChangePointDetector):
    """Weighted CUSUM on a single channel; tau is the log-ratio threshold h."""

    name = "cusum"

    def __init__(self, epoch_len: int, window: Optional[int] = None,
                 theta_grid: Optional[Sequence[float]] = None):
        super().__init__(epoch_len)
        self.window = window or epoch_len
        self.theta_grid = theta_grid

    def grid_for(self, ts: TimeSeries) -> List[float]:
        """
        Configured grid, or the first reference window's variance times CUSUM_GRID_FACTORS.

        Only the first W samples enter the default grid, so detections on a prefix
        of a series do not depend on the samples that follow it.
        """
        if self.theta_grid is not None:
            return list(self.theta_grid)
        reference = ts.data[0, :self.window]
        theta0 = float(np.var(reference, ddof=1)) if reference.shape[0] > 1 else 1.0
        return (max(theta0, VARIANCE_FLOOR) * CUSUM_GRID_FACTORS).tolist()

    def prepare(self, ts: TimeSeries):
        return ts, self.grid_for(ts)

    def segment(self, prepared, tau: float) -> Segmentation:
        ts, grid = prepared
        params = CusumParams(window=self.window, threshold=tau, theta_grid=grid, epoch_len=self.epoch_len)
        return cusum_weighted(ts, params)

    def default_taus(self, prepared) -> List[float]:
        return np.logspace(-1, 2.5, 20).tolist()


class KohlmorgenLemmDetector(ChangePointDetector):
    """Kernel-density Viterbi segmentation; tau is the switching penalty C."""

    name = "kl"

    def __init__(self, epoch_len: int, sigma="auto"):
        super().__init__(epoch_len)
        self.sigma = sigma

    def prepare(self, ts: TimeSeries):
        sigma = resolve_sigma(ts, self.sigma)
        return window_distance_matrix(ts, self.epoch_len, sigma), sigma

    def segment(self, prepared, tau: float) -> Segmentation:
        dm, sigma = prepared
        params = KlParams(window=self.epoch_len, sigma=sigma, transition_penalty=tau).to_dict()
        return segment_from_window_distances(dm, tau, params)

    def default_taus(self, prepared) -> List[float]:
        """20 log-spaced penalties scaled by the median off-diagonal window distance."""
        dm, _ = prepared
        off_diagonal = dm.values[~np.eye(dm.n, dtype=bool)]
        scale = float(np.median(off_diagonal)) if off_diagonal.size else 1.0
        scale = scale if scale > 0 else 1.0
        return (scale * np.logspace(-2, 2, 20)).tolist()


def create_detector(algorithm: str, epoch_len: int, **params: Dict[str, Any]) -> ChangePointDetector:
    """
    Create the detector for an algorithm name.

    Raises:
        InvalidArgument: If the algorithm is not supported
    """
    detector_map = {
        'slcd': SlcdDetector,
        'cusum': CusumDetector,
        'kl': KohlmorgenLemmDetector,
    }
    detector_class = detector_map.get(algorithm)
    if not detector_class:
        supported = ', '.join(detector_map.keys())
        raise InvalidArgument(f"Unsupported algorithm: {algorithm}. Supported algorithms: {supported}")
    logger.debug(f"Created {detector_class.__name__} (epoch_len={epoch_len})")
    return detector_class(epoch_len, **params)
