"""
Single-dataset detection pipeline.

Coordinates preprocessing, change-point detection and optional scoring against
known change points.
"""
import logging
import time
from typing import Any, Dict, Iterable, Optional, Sequence

from .analytics.experiments import best_channel_auc, sweep_auc
from .detectors import create_detector
from .exceptions import InvalidArgument, NoTrueBoundaries
from .models import DetectionResult, SsaConfig, TimeSeries
from .models.experiment import ARMS
from .ssa import find_most_nonstationary, random_projection

logger = logging.getLogger(__name__)


class DetectionPipeline:
    """
    Preprocess, detect and score one series.

    Phases:
    1. Preprocess - raw data, most non-stationary sources (SSA) or a random projection
    2. Detect - segmentation at the requested trade-off value
    3. Score - AUC over a trade-off sweep when true change points are known
    """

    def __init__(self, ssa_cfg: Optional[SsaConfig] = None):
        """
        Args:
            ssa_cfg: Settings for the non-stationary projection search
        """
        self.ssa_cfg = ssa_cfg or SsaConfig()

    def process(
        self,
        ts: TimeSeries,
        algorithm: str,
        tau: float,
        epoch_len: int,
        preprocess: str = "none",
        d_n: Optional[int] = None,
        detector_params: Optional[Dict[str, Any]] = None,
        truth: Optional[Iterable[int]] = None,
        taus: Sequence[float] = (),
        seed: int = 0,
    ) -> DetectionResult:
        """
        Run the pipeline end-to-end.

        Args:
            ts: Input series
            algorithm: Detector name (slcd, cusum, kl)
            tau: Trade-off value for the reported segmentation
            epoch_len: Samples per epoch
            preprocess: One of none, ssa_max, random_projection
            d_n: Projection dimension for the projection arms
            detector_params: Extra detector settings
            truth: Known change-point epochs; enables scoring
            taus: Sweep for scoring (default: the detector's grid)
            seed: Seed for the random projection

        Returns:
            DetectionResult; failures are reported in the result, not raised
        """
        start_time = time.time()
        solution = None
        try:
            if preprocess not in ARMS:
                raise InvalidArgument(f"Unsupported preprocessing: {preprocess}. Supported: {', '.join(ARMS)}")
            detector = create_detector(algorithm, epoch_len, **(detector_params or {}))

            logger.info("Phase 1: PREPROCESS")
            if preprocess == "none":
                series = ts
            else:
                if not d_n or not 1 <= d_n < ts.dim:
                    raise InvalidArgument(f"{preprocess} needs 1 <= d_n < D={ts.dim}")
                if preprocess == "ssa_max":
                    solution = find_most_nonstationary(ts, d_n, self.ssa_cfg)
                    series = solution.transform(ts)
                else:
                    series = ts.with_data(random_projection(ts.dim, d_n, seed).apply(ts.data))
                logger.info(f"Reduced {ts.dim} channels to {series.dim} by {preprocess}")

            if detector.name == "cusum" and series.dim > 1:
                raise InvalidArgument("CUSUM needs a single channel; use --preprocess with --dn 1")

            logger.info("Phase 2: DETECT")
            segmentation = detector.detect(series, tau)
            logger.info(f"{len(segmentation.epoch_boundaries)} change points over "
                        f"{segmentation.n_epochs} epochs")

            score = None
            warnings = []
            if truth is not None:
                logger.info("Phase 3: SCORE")
                scorer = best_channel_auc if detector.name == "cusum" else sweep_auc
                try:
                    score = scorer(detector, series, set(truth), taus)
                    logger.info(f"AUC {score:.4f}")
                except NoTrueBoundaries as e:
                    logger.warning(f"Skipping AUC: {e}")
                    warnings.append(str(e))

            return DetectionResult(
                segmentation=segmentation,
                preprocess=preprocess,
                solution=solution,
                auc=score,
                warnings=warnings,
                processing_time=time.time() - start_time,
            )

        except Exception as e:
            logger.error(f"Detection failed: {e}", exc_info=not isinstance(e, ValueError))
            return self._create_error_result(e, preprocess, time.time() - start_time)

    def _create_error_result(self, error: Exception, preprocess: str, processing_time: float) -> DetectionResult:
        return DetectionResult(
            segmentation=None,
            preprocess=preprocess,
            success=False,
            error_message=str(error),
            processing_time=processing_time,
            exception=error,
        )
