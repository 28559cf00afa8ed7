"""Experiment suite runner shared by the CLI and the smoke run."""
from __future__ import annotations

import logging
import time
from dataclasses import asdict, dataclass, field
from datetime import datetime, timezone
from typing import Any, Callable, Dict, List, Optional, Tuple

import pandas as pd

from .analytics.experiments import (
    modal_choice,
    run_classif_experiment,
    run_cpd_experiment,
    run_p_values_experiment,
    summarize,
)
from .config import SuiteConfig
from .exceptions import InvalidArgument, NonstatError, NumericalError
from .exporters import ResultExporter
from .models import ClassifSynthSpec, CpdSynthSpec, ExperimentSpec, SsaConfig, TradeoffConfig

logger = logging.getLogger(__name__)

ProgressCallback = Callable[[int, int, str], None]


@dataclass
class SweepPointResult:
    """Per-sweep-point summary of a suite run."""

    label: str
    param: Optional[str]
    value: Any
    success: bool
    rows: int = 0
    error: Optional[str] = None
    numerical_failure: bool = False
    processing_time: Optional[float] = None


@dataclass
class SuiteRunSummary:
    """Aggregate summary covering every sweep point of a suite."""

    suite: str
    kind: str
    output_directory: str
    generated_at: str
    seed: int
    results: List[SweepPointResult]
    totals: dict
    statistics: Dict[str, Any] = field(default_factory=dict)

    def to_manifest(self) -> dict:
        """Serialise the summary into a JSON-friendly manifest."""
        return {
            'suite': self.suite,
            'kind': self.kind,
            'output_directory': self.output_directory,
            'generated_at': self.generated_at,
            'seed': self.seed,
            'results': [asdict(result) for result in self.results],
            'totals': self.totals,
        }


def cpd_generator_at(base: Dict[str, Any], param: Optional[str], value: Any, hold: str = 'D') -> CpdSynthSpec:
    """
    Generator spec at one sweep point.

    Sweeping d_s or d_n keeps `hold` fixed (D, or the other source count) and
    derives the remaining dimension.
    """
    params = dict(base)
    if param is not None:
        params[param] = value
    if param in ('d_s', 'd_n') and hold != 'D':
        params.pop('D', None)
    elif param == 'd_s':
        params.pop('d_n', None)
    elif param == 'd_n':
        params.pop('d_s', None)

    if 'D' not in params:
        params['D'] = params['d_s'] + params['d_n']
    elif 'd_s' not in params:
        params['d_s'] = params['D'] - params['d_n']
    elif 'd_n' not in params:
        params['d_n'] = params['D'] - params['d_s']
    return CpdSynthSpec(**params)


def _sweep_points(suite: SuiteConfig) -> List[Tuple[Optional[str], Any, str]]:
    points = [(s['param'], v, s['hold']) for s in suite.sweeps for v in s['values']]
    return points or [(None, None, 'D')]


def _run_point(suite: SuiteConfig, param, value, hold, seed: int, jobs: int,
               realizations: int) -> pd.DataFrame:
    if suite.kind == 'cpd':
        spec = ExperimentSpec(
            generator=cpd_generator_at(suite.generator, param, value, hold),
            algorithm=suite.algorithm or 'slcd',
            arms=tuple(suite.arms),
            tau_sweep=suite.get('taus', ()),
            n_realizations=realizations,
            seed=seed,
            detector_params=suite.detector,
            ssa_restarts=suite.ssa.get('n_restarts', 3),
            ssa_epochs=suite.ssa.get('n_epochs'),
        )
        return run_cpd_experiment(spec, jobs=jobs)

    if suite.kind == 'p_values':
        generator = cpd_generator_at(suite.generator, param, value, hold)
        return run_p_values_experiment(generator, realizations, seed, SsaConfig(**suite.ssa),
                                       suite.p_threshold, jobs=jobs)

    frames = []
    for variant in suite.variants:
        overrides = dict(suite.generator)
        if param is not None:
            overrides[param] = value
        variant_spec = ClassifSynthSpec(variant=variant, seed=seed, **overrides)
        frame = run_classif_experiment(variant_spec, suite.methods, realizations,
                                       TradeoffConfig(**suite.tradeoff), suite.alpha, jobs=jobs)
        frames.append(frame.assign(variant=variant))
    return pd.concat(frames, ignore_index=True)


def _statistics(kind: str, frame: pd.DataFrame) -> Dict[str, Any]:
    if frame.empty:
        return {}
    if kind == 'cpd':
        return {'auc': summarize(frame, 'auc', ['sweep_param', 'sweep_value', 'arm'])}
    if kind == 'p_values':
        return {
            'chosen_ds': summarize(frame, 'chosen_ds', ['true_ds']),
            'modal_chosen_ds': {str(k): v for k, v in modal_choice(frame).items()},
            'fraction_correct': {str(k): float(g['correct'].mean()) for k, g in frame.groupby('true_ds')},
        }
    return {
        'error': summarize(frame, 'error', ['variant', 'sweep_param', 'sweep_value', 'method']),
        'angle_deg': summarize(frame, 'angle_deg', ['variant', 'sweep_param', 'sweep_value', 'method']),
    }


def run_suite(
    suite: SuiteConfig,
    exporter: ResultExporter,
    *,
    seed: int = 0,
    jobs: int = 1,
    realizations: Optional[int] = None,
    progress_callback: Optional[ProgressCallback] = None,
) -> Tuple[SuiteRunSummary, pd.DataFrame]:
    """
    Run every sweep point of a suite and return its summary and tidy result table.

    A failing sweep point is recorded in the summary and the remaining points still run.
    """
    if suite.kind not in ('cpd', 'p_values', 'classif'):
        raise InvalidArgument(f"Unsupported suite kind: {suite.kind}")
    realizations = realizations or suite.realizations
    points = _sweep_points(suite)
    frames: List[pd.DataFrame] = []
    results: List[SweepPointResult] = []

    for idx, (param, value, hold) in enumerate(points, start=1):
        label = f"{param}={value}" if param else suite.suite_name
        start_time = time.time()
        try:
            frame = _run_point(suite, param, value, hold, seed, jobs, realizations)
            frame.insert(0, 'sweep_value', value if param else '')
            frame.insert(0, 'sweep_param', param or '')
            frame.insert(0, 'suite', suite.suite_name)
            frames.append(frame)
            results.append(SweepPointResult(label, param, value, True, rows=len(frame),
                                            processing_time=time.time() - start_time))
        except NonstatError as exc:
            logger.error(f"Sweep point {label} failed: {exc}")
            results.append(SweepPointResult(label, param, value, False, error=str(exc),
                                            numerical_failure=isinstance(exc, NumericalError),
                                            processing_time=time.time() - start_time))
        finally:
            if progress_callback:
                progress_callback(idx, len(points), label)

    table = pd.concat(frames, ignore_index=True) if frames else pd.DataFrame()
    failures = sum(1 for r in results if not r.success)
    summary = SuiteRunSummary(
        suite=suite.suite_name,
        kind=suite.kind,
        output_directory=str(exporter.out_dir),
        generated_at=datetime.now(timezone.utc).isoformat(),
        seed=seed,
        results=results,
        totals={
            'points': len(points),
            'successes': len(points) - failures,
            'failures': failures,
            'realizations': realizations,
        },
        statistics=_statistics(suite.kind, table),
    )
    return summary, table


def write_suite_outputs(summary: SuiteRunSummary, table: pd.DataFrame, exporter: ResultExporter) -> None:
    """Persist results.csv, summary.json and manifest.json."""
    exporter.write_frame('results.csv', table)
    exporter.write_json('summary.json', {'suite': summary.suite, 'kind': summary.kind,
                                         **summary.statistics})
    exporter.write_json('manifest.json', summary.to_manifest())
