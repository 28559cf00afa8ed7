"""Data models for the non-stationarity toolkit."""
from .time_series import (
    TimeSeries,
    EpochPartition,
    GaussianParams,
    EpochStats,
    WhiteningTransform,
)
from .projection import Projection, ProjectionKind, SsaConfig, SsaSolution
from .test_results import LrTestResult, DsSelection
from .segmentation import Segmentation, DistanceMatrix, CusumParams, KlParams
from .classifier import LinearClassifier, ClassEpochStats, TradeoffConfig
from .synth import (
    CpdSynthSpec,
    MarkovModelState,
    ClassifVariant,
    ClassifSynthSpec,
    ClassifDataset,
    GroundTruth,
)
from .experiment import RocCurve, ExperimentSpec, RunConfig
from .detection_result import DetectionResult

__all__ = [
    'TimeSeries', 'EpochPartition', 'GaussianParams', 'EpochStats', 'WhiteningTransform',
    'Projection', 'ProjectionKind', 'SsaConfig', 'SsaSolution',
    'LrTestResult', 'DsSelection',
    'Segmentation', 'DistanceMatrix', 'CusumParams', 'KlParams',
    'LinearClassifier', 'ClassEpochStats', 'TradeoffConfig',
    'CpdSynthSpec', 'MarkovModelState', 'ClassifVariant', 'ClassifSynthSpec', 'ClassifDataset',
    'GroundTruth',
    'RocCurve', 'ExperimentSpec', 'RunConfig',
    'DetectionResult',
]
