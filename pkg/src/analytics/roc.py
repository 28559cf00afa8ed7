"""ROC curves and AUC at epoch granularity."""
from typing import Iterable, List, Optional, Sequence, Set, Union

import numpy as np
from sklearn.metrics import auc as trapezoid_auc

from ..exceptions import NoTrueBoundaries
from ..models.experiment import RocCurve
from ..models.segmentation import Segmentation

Detections = Union[Segmentation, Iterable[int]]


def _boundary_set(detected: Detections) -> Set[int]:
    if isinstance(detected, Segmentation):
        return detected.boundary_set
    return {int(b) for b in detected}


def rates(detected: Detections, truth: Set[int], n_epochs: int):
    """
    (FPR, TPR) of one detection set.

    TPR = |detected & true| / |true| and FPR = |detected - true| / (n_epochs - 1 - |true|);
    with no negative boundaries FPR is 0.
    """
    truth = set(truth)
    if not truth:
        raise NoTrueBoundaries("ROC evaluation needs at least one true boundary")
    detected = _boundary_set(detected)
    negatives = n_epochs - 1 - len(truth)
    tpr = len(detected & truth) / len(truth)
    fpr = len(detected - truth) / negatives if negatives > 0 else 0.0
    return min(fpr, 1.0), tpr


def roc_from_sweep(detections: Sequence[Detections], truth: Iterable[int], n_epochs: int,
                   taus: Optional[Sequence[float]] = None) -> RocCurve:
    """
    ROC curve of a trade-off sweep.

    Args:
        detections: One detection set (or Segmentation) per tau
        truth: True epoch boundaries
        n_epochs: Epoch count shared by detector and ground truth
        taus: Trade-off value per detection set

    Returns:
        RocCurve sorted by FPR with (0, 0) and (1, 1) appended
    """
    truth = set(truth)
    taus = list(taus) if taus is not None else [None] * len(detections)
    entries = [(*rates(d, truth, n_epochs), tau) for d, tau in zip(detections, taus)]
    entries += [(0.0, 0.0, None), (1.0, 1.0, None)]
    entries.sort(key=lambda entry: (entry[0], entry[1]))
    return RocCurve(points=[(fpr, tpr) for fpr, tpr, _ in entries],
                    tau_values=[tau for _, _, tau in entries])


def _collapsed(curve: RocCurve) -> List[tuple]:
    """FPR-sorted points with endpoints, keeping the best TPR per FPR."""
    best = {0.0: 0.0, 1.0: 1.0}
    for fpr, tpr in curve.points:
        best[fpr] = max(tpr, best.get(fpr, 0.0))
    return sorted(best.items())


def auc(curve: RocCurve) -> float:
    """Trapezoidal area under a ROC curve."""
    points = np.array(_collapsed(curve))
    return float(trapezoid_auc(points[:, 0], points[:, 1]))
