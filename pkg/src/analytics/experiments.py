"""Monte-Carlo experiment runners producing tidy result tables."""
import logging
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import replace
from typing import Callable, Dict, List, Optional, Sequence

import pandas as pd

from ..classifiers.trainer import train_classifier
from ..detectors.base_detector import ChangePointDetector, create_detector
from ..exceptions import InvalidArgument, NoTrueBoundaries
from ..models.classifier import TradeoffConfig
from ..models.experiment import ExperimentSpec
from ..models.projection import SsaConfig
from ..models.synth import ClassifSynthSpec, CpdSynthSpec
from ..models.time_series import TimeSeries
from ..ssa.solver import find_most_nonstationary, random_projection
from ..synth.classif_generator import gen_classif_dataset
from ..synth.cpd_generator import gen_cpd_dataset
from ..synth.rng import Stream, make_rng
from ..validators.stationarity_validator import select_ds
from .angles import subspace_angle_degrees
from .roc import auc, roc_from_sweep

logger = logging.getLogger(__name__)


def realization_seed(seed: int, index: int) -> int:
    """Independent per-realization seed derived from (seed, index)."""
    return int(make_rng(seed, Stream.REALIZATION, index).integers(2 ** 31 - 1))


def map_ordered(fn: Callable, items: Sequence, jobs: int = 1) -> List:
    """fn over items, in a process pool when jobs > 1; results keep item order."""
    if jobs <= 1 or len(items) <= 1:
        return [fn(item) for item in items]
    with ProcessPoolExecutor(max_workers=jobs) as executor:
        return list(executor.map(fn, items))


def summarize(df: pd.DataFrame, value: str, by: Sequence[str]) -> Dict[str, dict]:
    """
    Median, quartiles, mean and count of one column per group.

    Returns:
        {group label: {'median', 'q25', 'q75', 'mean', 'n'}}, group labels joined by '/'
    """
    summary = {}
    for key, group in df.dropna(subset=[value]).groupby(list(by), sort=True):
        key = key if isinstance(key, tuple) else (key,)
        values = group[value]
        summary['/'.join(str(k) for k in key)] = {
            'median': float(values.median()),
            'q25': float(values.quantile(0.25)),
            'q75': float(values.quantile(0.75)),
            'mean': float(values.mean()),
            'n': int(values.count()),
        }
    return summary


def sweep_auc(detector: ChangePointDetector, series: TimeSeries, truth: set,
              taus: Sequence[float] = ()) -> float:
    """AUC of a detector's trade-off sweep on one series."""
    prepared = detector.prepare(series)
    taus = list(taus) or detector.default_taus(prepared)
    segmentations = [detector.segment(prepared, tau) for tau in taus]
    curve = roc_from_sweep(segmentations, truth, segmentations[0].n_epochs, taus)
    return auc(curve)


def best_channel_auc(detector: ChangePointDetector, series: TimeSeries, truth: set,
                     taus: Sequence[float] = ()) -> float:
    """Best single-channel AUC; the CUSUM baseline on multichannel data."""
    return max(sweep_auc(detector, series.with_data(series.data[[channel]]), truth, taus)
               for channel in range(series.dim))


def preprocess(ts: TimeSeries, arm: str, d_n: int, ssa_cfg: SsaConfig, seed: int) -> TimeSeries:
    """Raw data, its estimated most non-stationary sources, or a random projection."""
    if arm == "none":
        return ts
    if arm == "ssa_max":
        return find_most_nonstationary(ts, d_n, ssa_cfg).transform(ts)
    if arm == "random_projection":
        return ts.with_data(random_projection(ts.dim, d_n, seed).apply(ts.data))
    raise InvalidArgument(f"unknown preprocessing arm '{arm}'")


def _cpd_realization(job) -> List[dict]:
    spec, index = job
    seed = realization_seed(spec.seed, index)
    generator = replace(spec.generator, seed=seed)
    ts, truth = gen_cpd_dataset(generator)
    true_boundaries = set(truth.change_epochs)
    detector = create_detector(spec.algorithm, generator.epoch_len, **spec.detector_params)
    ssa_cfg = SsaConfig(n_epochs=spec.ssa_epochs or generator.n_epochs,
                        n_restarts=spec.ssa_restarts, seed=seed)

    rows = []
    for arm in spec.arms:
        try:
            series = preprocess(ts, arm, generator.d_n, ssa_cfg, seed)
            score = (best_channel_auc if detector.name == "cusum" else sweep_auc)(
                detector, series, true_boundaries, spec.tau_sweep)
        except NoTrueBoundaries:
            logger.warning(f"Realization {index} has no true change points, AUC undefined")
            score = math.nan
        rows.append({
            'realization': index,
            'seed': seed,
            'arm': arm,
            'auc': score,
            'n_true': len(true_boundaries),
        })
    logger.info(f"Realization {index}: " + ", ".join(f"{r['arm']}={r['auc']:.3f}" for r in rows))
    return rows


def run_cpd_experiment(spec: ExperimentSpec, jobs: int = 1) -> pd.DataFrame:
    """
    Three-arm change-point comparison over independent realizations.

    Each realization generates a dataset, preprocesses it per arm, sweeps the
    detector's trade-off parameter and records the AUC.

    Returns:
        One row per realization and arm: realization, seed, arm, auc, n_true
    """
    if spec.generator.d_n < 1 and any(arm != "none" for arm in spec.arms):
        raise InvalidArgument("projection arms need at least one non-stationary source")
    chunks = map_ordered(_cpd_realization, [(spec, r) for r in range(spec.n_realizations)], jobs)
    return pd.DataFrame([row for chunk in chunks for row in chunk])


def _p_values_realization(job) -> dict:
    generator, ssa_cfg, p_threshold, index, base_seed = job
    seed = realization_seed(base_seed, index)
    ts, _ = gen_cpd_dataset(replace(generator, seed=seed))
    selection = select_ds(ts, replace(ssa_cfg, seed=seed), p_threshold)
    logger.info(f"d_s={generator.d_s}, realization {index}: chose {selection.chosen_ds}")
    return {
        'true_ds': generator.d_s,
        'realization': index,
        'seed': seed,
        'chosen_ds': selection.chosen_ds,
        'correct': selection.chosen_ds == generator.d_s,
    }


def run_p_values_experiment(generator: CpdSynthSpec, n_realizations: int, seed: int,
                            ssa_cfg: Optional[SsaConfig] = None, p_threshold: float = 0.01,
                            jobs: int = 1) -> pd.DataFrame:
    """
    Stationary-dimension selection over realizations of one generator setting.

    Returns:
        One row per realization: true_ds, realization, seed, chosen_ds, correct
    """
    ssa_cfg = ssa_cfg or SsaConfig()
    jobs_list = [(generator, ssa_cfg, p_threshold, r, seed) for r in range(n_realizations)]
    return pd.DataFrame(map_ordered(_p_values_realization, jobs_list, jobs))


def modal_choice(df: pd.DataFrame) -> Dict[int, int]:
    """Most frequent chosen d_s per true d_s (smallest on ties)."""
    return {int(true): int(group['chosen_ds'].mode().min())
            for true, group in df.groupby('true_ds')}


def _parse_method(method: str, default_alpha: Optional[float]):
    """'slda' uses the default alpha, 'slda@0.5' a fixed one, 'slda@cv' cross-validation."""
    name, _, suffix = method.partition('@')
    if not suffix:
        return name, default_alpha if name in ("slda", "randlda") else None
    return name, None if suffix == "cv" else float(suffix)


def _classif_realization(job) -> List[dict]:
    variant_spec, methods, cfg, alpha, index = job
    seed = realization_seed(variant_spec.seed, index)
    dataset = gen_classif_dataset(replace(variant_spec, seed=seed))
    direction = dataset.truth.discriminative_direction
    run_cfg = replace(cfg, seed=seed)

    rows = []
    for method in methods:
        name, fixed_alpha = _parse_method(method, alpha)
        classifier, chosen = train_classifier(name, dataset.train, run_cfg, alpha=fixed_alpha, seed=seed)
        rows.append({
            'realization': index,
            'seed': seed,
            'method': method,
            'alpha': chosen,
            'error': classifier.error_rate(dataset.test.data.T, dataset.test.labels),
            'angle_deg': subspace_angle_degrees(classifier.w, direction) if direction is not None else math.nan,
        })
    return rows


def run_classif_experiment(variant_spec: ClassifSynthSpec, methods: Sequence[str], n_realizations: int,
                           cfg: Optional[TradeoffConfig] = None, alpha: Optional[float] = 0.1,
                           jobs: int = 1) -> pd.DataFrame:
    """
    Classifier comparison over realizations of one simulation setting.

    Methods are trainer names, optionally suffixed '@<alpha>' or '@cv'.

    Returns:
        One row per realization and method: realization, seed, method, alpha, error, angle_deg
    """
    cfg = cfg or TradeoffConfig()
    job_list = [(variant_spec, tuple(methods), cfg, alpha, r) for r in range(n_realizations)]
    chunks = map_ordered(_classif_realization, job_list, jobs)
    df = pd.DataFrame([row for chunk in chunks for row in chunk])
    for method, group in df.groupby("method", sort=False):
        angles = group["angle_deg"].dropna()
        angle_note = f", median angle {angles.median():.2f}" if len(angles) else ""
        logger.info(f"{variant_spec.variant.value} {method}: mean error {group['error'].mean():.4f}{angle_note}")
    return df
