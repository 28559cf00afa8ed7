"""Detection pipeline result model."""
from dataclasses import dataclass, field
from datetime import datetime
from typing import List, Optional

from .projection import SsaSolution
from .segmentation import Segmentation


@dataclass
class DetectionResult:
    """
    Complete result of one preprocess-and-detect run.

    Attributes:
        segmentation: Detected change points (None on failure)
        preprocess: Preprocessing applied (none, ssa_max, random_projection)
        solution: Non-stationary projection search result when preprocess is ssa_max
        auc: Area under the ROC curve when ground truth was supplied
        success: Whether detection completed
        error_message: Error message if detection failed
        exception: The exception behind a failure, kept for exit-code mapping
        warnings: Warnings raised during the run
        processing_time: Time taken (seconds)
        detected_at: Timestamp of the run
    """
    segmentation: Optional[Segmentation]
    preprocess: str = "none"
    solution: Optional[SsaSolution] = None
    auc: Optional[float] = None
    success: bool = True
    error_message: Optional[str] = None
    warnings: List[str] = field(default_factory=list)
    processing_time: float = 0.0
    detected_at: datetime = field(default_factory=datetime.now)
    exception: Optional[BaseException] = field(default=None, repr=False, compare=False)

    @property
    def boundary_count(self) -> int:
        return len(self.segmentation.epoch_boundaries) if self.segmentation else 0

    def to_dict(self) -> dict:
        return {
            'success': self.success,
            'preprocess': self.preprocess,
            'boundary_count': self.boundary_count,
            'segmentation': self.segmentation.to_dict() if self.segmentation else None,
            'ssa': self.solution.to_dict() if self.solution else None,
            'auc': self.auc,
            'processing_time': self.processing_time,
            'detected_at': self.detected_at.isoformat(),
            'warnings': self.warnings,
            'error_message': self.error_message,
        }
