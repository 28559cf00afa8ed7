"""Command-line interface for the non-stationarity toolkit."""
import json
import logging
import sys
from contextlib import contextmanager
from pathlib import Path
from typing import Optional

import click
import numpy as np
import pandas as pd
from rich.console import Console
from rich.progress import BarColumn, Progress, SpinnerColumn, TextColumn
from rich.table import Table

from .batch_runner import run_suite, write_suite_outputs
from .classifiers import METHODS, train_classifier
from .config import get_suite_config_loader
from .config.settings import (
    DEFAULT_JOBS,
    DEFAULT_SEED,
    OUTPUT_DIR,
    P_THRESHOLD,
    SLCD_EPOCHS,
    SLDA_EPOCHS,
    SLDA_RESTARTS,
    SSA_DEFAULT_EPOCHS,
    SSA_RESTARTS,
)
from .exceptions import InvalidInputError, NumericalError
from .exporters import ResultExporter
from .models import ClassifSynthSpec, ClassifVariant, CpdSynthSpec, RunConfig, SsaConfig, TradeoffConfig
from .models.experiment import ALGORITHMS, ARMS
from .pipeline import DetectionPipeline
from .ssa import find_most_nonstationary, find_stationary
from .synth import gen_classif_dataset, gen_cpd_dataset
from .utils.csv_reader import read_time_series
from .utils.logger import log_run_audit, set_console_level, setup_logger
from .validators import bnise_report, select_ds

console = Console()
logger = setup_logger("nonstat")
setup_logger("src")

EXIT_USAGE = 2
EXIT_NUMERICAL = 3


@contextmanager
def _guarded(command: str, exporter: Optional[ResultExporter] = None):
    """Map toolkit errors onto exit codes and write the audit line."""
    out_dir = str(exporter.out_dir) if exporter else None
    try:
        yield
    except InvalidInputError as e:
        console.print(f"[red]Invalid input: {e}[/red]")
        log_run_audit(command, False, out_dir=out_dir, error=str(e))
        sys.exit(EXIT_USAGE)
    except NumericalError as e:
        console.print(f"[red]Numerical failure: {e}[/red]")
        log_run_audit(command, False, out_dir=out_dir, error=str(e))
        sys.exit(EXIT_NUMERICAL)
    log_run_audit(command, True, out_dir=out_dir)


def _exporter(ctx: click.Context) -> ResultExporter:
    return ResultExporter(ctx.obj['out_dir'])


def _write_run_config(ctx: click.Context, exporter: ResultExporter, command: str,
                      inputs: Optional[dict] = None, **options) -> None:
    exporter.write_run_config(RunConfig(
        command=command,
        seed=ctx.obj['seed'],
        out_dir=str(exporter.out_dir),
        jobs=ctx.obj['jobs'],
        inputs=inputs or {},
        options=options,
    ))


def _parse_grid(grid: Optional[str]):
    if not grid:
        return None
    try:
        return tuple(float(v) for v in grid.split(','))
    except ValueError:
        raise click.BadParameter(f"expected comma-separated numbers, got '{grid}'", param_hint='--grid')


@click.group()
@click.version_option(version="0.1.0")
@click.option('--seed', type=int, default=DEFAULT_SEED, envvar='NONSTAT_SEED', show_default=True,
              help='Base seed (env NONSTAT_SEED)')
@click.option('--jobs', type=click.IntRange(min=1), default=DEFAULT_JOBS, show_default=True,
              help='Worker processes for experiment realizations')
@click.option('--out-dir', type=click.Path(file_okay=False), default=str(OUTPUT_DIR), show_default=True,
              help='Directory for every output file')
@click.option('-v', '--verbose', is_flag=True, help='Show DEBUG messages on the console')
@click.pass_context
def cli(ctx, seed, jobs, out_dir, verbose):
    """Non-stationarity toolkit - stationary subspaces, change points and stationary classifiers."""
    ctx.ensure_object(dict)
    if verbose:
        for name in ('nonstat', 'src'):
            set_console_level(logging.getLogger(name), logging.DEBUG)
    ctx.obj.update({'seed': seed, 'jobs': jobs, 'out_dir': Path(out_dir)})


@cli.command()
@click.option('--kind', type=click.Choice(['cpd', 'classif']), default='cpd', show_default=True)
@click.option('--D', 'D', type=int, default=10, show_default=True, help='Channels (cpd)')
@click.option('--ds', type=int, default=5, show_default=True, help='Stationary sources (cpd)')
@click.option('--dn', type=int, help='Non-stationary sources (cpd, default D - ds)')
@click.option('--q', type=float, default=2.0, show_default=True, help='Power change (cpd)')
@click.option('--epochs', type=int, default=200, show_default=True, help='Epochs (cpd)')
@click.option('--epoch-len', type=int, default=100, show_default=True, help='Samples per epoch (cpd)')
@click.option('--variant', type=click.Choice([v.value for v in ClassifVariant]), default='simple',
              show_default=True, help='Simulation family (classif)')
@click.option('--separation', type=float, help='Class-mean gap (classif sanity setups)')
@click.option('--outlier-rate', type=float, help='Outlier fraction per class (classif)')
@click.option('--a-ns', type=float, default=2.0, show_default=True, help='Non-stationarity level (subspace_simple)')
@click.option('--a8', type=float, default=1.0, show_default=True, help='Test-epoch offset (transfer setups)')
@click.pass_context
def gen(ctx, kind, D, ds, dn, q, epochs, epoch_len, variant, separation, outlier_rate, a_ns, a8):
    """Generate a synthetic dataset with its ground truth."""
    exporter = _exporter(ctx)
    seed = ctx.obj['seed']
    with _guarded('gen', exporter):
        if kind == 'cpd':
            spec = CpdSynthSpec(D=D, d_s=ds, d_n=D - ds if dn is None else dn, q=q,
                                n_epochs=epochs, epoch_len=epoch_len, seed=seed)
            ts, truth = gen_cpd_dataset(spec)
            exporter.write_series('data.csv', ts)
            files = ['data.csv']
            console.print(f"[green]Generated {ts.length} samples x {ts.dim} channels, "
                          f"{len(truth.change_epochs)} change points[/green]")
        else:
            spec = ClassifSynthSpec(variant=variant, seed=seed, separation=separation,
                                    outlier_rate=outlier_rate, a_ns=a_ns, a8=a8)
            dataset = gen_classif_dataset(spec)
            truth = dataset.truth
            exporter.write_series('train.csv', dataset.train)
            exporter.write_series('test.csv', dataset.test)
            files = ['train.csv', 'test.csv']
            console.print(f"[green]Generated {variant}: {dataset.train.length} training and "
                          f"{dataset.test.length} test samples[/green]")

        exporter.write_json('truth.json', {'spec': spec.to_dict(), **truth.to_dict()})
        _write_run_config(ctx, exporter, 'gen', spec=spec.to_dict())
        console.print(f"Wrote {', '.join(files)} and truth.json to {exporter.out_dir}")


@cli.command()
@click.argument('input_path', type=click.Path(exists=True, dir_okay=False))
@click.option('--ds', type=int, help='Dimension of the stationary projection')
@click.option('--dn', type=int, help='Dimension of the most non-stationary projection')
@click.option('--maximize/--minimize', default=None,
              help='Search direction (default: minimize for --ds, maximize for --dn)')
@click.option('--epochs', type=int, default=SSA_DEFAULT_EPOCHS, show_default=True)
@click.option('--restarts', type=int, default=SSA_RESTARTS, show_default=True)
@click.option('--max-iter', type=int, help='Iteration budget per restart')
@click.pass_context
def ssa(ctx, input_path, ds, dn, maximize, epochs, restarts, max_iter):
    """Estimate a stationary or most non-stationary projection of INPUT_PATH."""
    if (ds is None) == (dn is None):
        raise click.UsageError("pass exactly one of --ds and --dn")
    d = ds if ds is not None else dn
    if maximize is None:
        maximize = dn is not None

    exporter = _exporter(ctx)
    with _guarded('ssa', exporter):
        ts = read_time_series(input_path)
        cfg_kwargs = {'n_epochs': epochs, 'n_restarts': restarts, 'seed': ctx.obj['seed']}
        if max_iter:
            cfg_kwargs['max_iterations'] = max_iter
        cfg = SsaConfig(**cfg_kwargs)

        solution = (find_most_nonstationary if maximize else find_stationary)(ts, d, cfg)

        exporter.write_matrix('projection.csv', solution.demixing_matrix())
        exporter.write_series('sources.csv', solution.transform(ts), include_labels=False)
        exporter.write_json('ssa.json', {'d': d, 'maximize': maximize, **solution.to_dict()})
        _write_run_config(ctx, exporter, 'ssa', inputs={'data': str(input_path)},
                          d=d, maximize=maximize, **cfg.to_dict())

        console.print(f"[green]{'Most non-stationary' if maximize else 'Stationary'} "
                      f"{d}-dim projection[/green], loss {solution.loss:.6g}")


@cli.command('select-ds')
@click.argument('input_path', type=click.Path(exists=True, dir_okay=False))
@click.option('--p', 'p_threshold', type=float, default=P_THRESHOLD, show_default=True,
              help='Significance level of the stationarity test')
@click.option('--epochs', type=int, default=SSA_DEFAULT_EPOCHS, show_default=True)
@click.option('--restarts', type=int, default=SSA_RESTARTS, show_default=True)
@click.pass_context
def select_ds_command(ctx, input_path, p_threshold, epochs, restarts):
    """Choose the number of stationary sources of INPUT_PATH."""
    exporter = _exporter(ctx)
    with _guarded('select-ds', exporter):
        ts = read_time_series(input_path)
        cfg = SsaConfig(n_epochs=epochs, n_restarts=restarts, seed=ctx.obj['seed'])
        selection = select_ds(ts, cfg, p_threshold)

        exporter.write_json('ds_selection.json', selection.to_dict())
        _write_run_config(ctx, exporter, 'select-ds', inputs={'data': str(input_path)},
                          p=p_threshold, **cfg.to_dict())

        table = Table(show_header=True, header_style="bold magenta")
        table.add_column("d_s", style="cyan")
        table.add_column("Lambda")
        table.add_column("dof")
        table.add_column("p", style="green")
        for (d_s, p), result in zip(selection.per_ds_pvalues, selection.results):
            table.add_row(str(d_s), f"{result.statistic:.4f}", str(result.dof), f"{p:.4g}")
        console.print(table)
        console.print(f"[green]Chosen d_s = {selection.chosen_ds}[/green]")


@cli.command()
@click.argument('input_path', type=click.Path(exists=True, dir_okay=False))
@click.option('--d', 'd', type=int, required=True, help='Largest stationary dimension scored')
@click.option('--permutations', type=int, default=10, show_default=True)
@click.option('--epochs', type=int, default=SSA_DEFAULT_EPOCHS, show_default=True)
@click.option('--restarts', type=int, default=SSA_RESTARTS, show_default=True)
@click.pass_context
def bnise(ctx, input_path, d, permutations, epochs, restarts):
    """Permutation-normalized held-out SSA loss of INPUT_PATH."""
    exporter = _exporter(ctx)
    with _guarded('bnise', exporter):
        ts = read_time_series(input_path)
        cfg = SsaConfig(n_epochs=epochs, n_restarts=restarts, seed=ctx.obj['seed'])
        report = bnise_report(ts, d, permutations, cfg)
        exporter.write_json('bnise.json', report.to_dict())
        _write_run_config(ctx, exporter, 'bnise', inputs={'data': str(input_path)},
                          d=d, permutations=permutations, **cfg.to_dict())
        console.print(f"[green]BNISE = {report.value:.4f}[/green]")


@cli.command()
@click.argument('input_path', type=click.Path(exists=True, dir_okay=False))
@click.option('--algo', type=click.Choice(ALGORITHMS), default='slcd', show_default=True)
@click.option('--tau', type=float, required=True,
              help='Trade-off value: cluster count (slcd), threshold h (cusum), penalty C (kl)')
@click.option('--epoch-len', type=int, help=f'Samples per epoch (default: length / {SLCD_EPOCHS})')
@click.option('--preprocess', type=click.Choice(ARMS), default='none', show_default=True)
@click.option('--dn', type=int, help='Projection dimension for the projection preprocessing')
@click.option('--window', type=int, help='CUSUM reference window (default: epoch length)')
@click.option('--sigma', type=float, help='K/L kernel width (default: rule of thumb)')
@click.option('--truth', 'truth_path', type=click.Path(exists=True, dir_okay=False),
              help='truth.json with change_epochs; adds an AUC to the report')
@click.option('--epochs', 'ssa_epochs', type=int, default=SSA_DEFAULT_EPOCHS, show_default=True,
              help='Epochs for the non-stationary projection search')
@click.pass_context
def detect(ctx, input_path, algo, tau, epoch_len, preprocess, dn, window, sigma, truth_path, ssa_epochs):
    """Detect change points in INPUT_PATH."""
    exporter = _exporter(ctx)
    with _guarded('detect', exporter):
        ts = read_time_series(input_path)
        epoch_len = epoch_len or max(2, ts.length // SLCD_EPOCHS)
        params = {}
        if algo == 'cusum' and window:
            params['window'] = window
        if algo == 'kl' and sigma:
            params['sigma'] = sigma
        truth = None
        if truth_path:
            truth = json.loads(Path(truth_path).read_text(encoding='utf-8'))['change_epochs']

        pipeline = DetectionPipeline(SsaConfig(n_epochs=ssa_epochs, seed=ctx.obj['seed']))
        with Progress(SpinnerColumn(), TextColumn("{task.description}"), console=console) as progress:
            progress.add_task(f"Running {algo}...", total=None)
            result = pipeline.process(ts, algo, tau, epoch_len, preprocess=preprocess, d_n=dn,
                                      detector_params=params, truth=truth, seed=ctx.obj['seed'])
        if not result.success:
            raise result.exception

        exporter.write_json('segmentation.json', result.segmentation.to_dict())
        exporter.write_json('detection.json', result.to_dict())
        _write_run_config(ctx, exporter, 'detect', inputs={'data': str(input_path), 'truth': truth_path},
                          algo=algo, tau=tau, epoch_len=epoch_len, preprocess=preprocess, dn=dn,
                          detector_params=params)

        console.print(f"[green]{result.boundary_count} change points[/green] "
                      f"over {result.segmentation.n_epochs} epochs: {result.segmentation.epoch_boundaries}")
        if result.auc is not None:
            console.print(f"  AUC: {result.auc:.4f}")


@cli.command()
@click.argument('train_path', type=click.Path(exists=True, dir_okay=False))
@click.argument('test_path', type=click.Path(exists=True, dir_okay=False))
@click.option('--method', type=click.Choice(METHODS), default='lda', show_default=True)
@click.option('--alpha', type=click.FloatRange(0.0, 1.0), help='Fixed trade-off (slda, randlda)')
@click.option('--grid', help='Comma-separated alpha grid for cross-validation')
@click.option('--gamma', default='auto', show_default=True, help='rLDA shrinkage intensity or "auto"')
@click.option('--epochs', type=int, default=SLDA_EPOCHS, show_default=True,
              help='Contiguous epochs when the training data carries no epoch ids')
@click.option('--restarts', type=int, default=SLDA_RESTARTS, show_default=True)
@click.option('--test-labels/--no-test-labels', default=True, show_default=True,
              help='Whether the test CSV ends in a label column')
@click.pass_context
def classify(ctx, train_path, test_path, method, alpha, grid, gamma, epochs, restarts, test_labels):
    """Train on TRAIN_PATH and predict the samples of TEST_PATH."""
    exporter = _exporter(ctx)
    with _guarded('classify', exporter):
        if gamma != 'auto':
            try:
                gamma = float(gamma)
            except ValueError:
                raise click.BadParameter(f"expected a number or 'auto', got '{gamma}'", param_hint='--gamma')
        grid_values = _parse_grid(grid)
        cfg_kwargs = {'n_epochs': epochs, 'restarts': restarts, 'seed': ctx.obj['seed']}
        if grid_values:
            cfg_kwargs['alpha_grid'] = grid_values
        cfg = TradeoffConfig(**cfg_kwargs)

        train = read_time_series(train_path, labels=True)
        test = read_time_series(test_path, labels=test_labels)
        if test.dim != train.dim:
            raise click.UsageError(f"test data has {test.dim} channels, training data {train.dim}")

        classifier, chosen_alpha = train_classifier(method, train, cfg, alpha=alpha, gamma=gamma,
                                                    seed=ctx.obj['seed'])
        samples = test.data.T
        predictions = classifier.predict(samples)

        metrics = {'method': method, 'alpha': chosen_alpha, 'n_test': int(len(predictions))}
        if test.labels is not None:
            metrics['error'] = classifier.error_rate(samples, test.labels)
        exporter.write_json('classifier.json', classifier.to_dict())
        exporter.write_json('metrics.json', metrics)
        exporter.write_frame('predictions.csv', pd.DataFrame({'label': predictions.astype(int)}))
        _write_run_config(ctx, exporter, 'classify', inputs={'train': str(train_path), 'test': str(test_path)},
                          method=method, alpha=alpha, gamma=gamma, alpha_grid=list(cfg.alpha_grid),
                          n_epochs=epochs, restarts=restarts)

        console.print(f"[green]Trained {method}[/green]"
                      + (f" (alpha={chosen_alpha:g})" if chosen_alpha is not None else ""))
        if 'error' in metrics:
            console.print(f"  Test error: {metrics['error']:.4f}")


@cli.command()
@click.option('--suite', 'suite_name', required=True, help='Suite name (see `nonstat suites`)')
@click.option('--realizations', type=click.IntRange(min=1), help='Override the suite realization count')
@click.pass_context
def experiment(ctx, suite_name, realizations):
    """Run an experiment suite and write results.csv, summary.json and manifest.json."""
    loader = get_suite_config_loader()
    suite = loader.get_config(suite_name)
    if suite is None:
        raise click.BadParameter(
            f"unknown suite '{suite_name}'. Available: {', '.join(loader.get_all_suites())}",
            param_hint='--suite',
        )

    exporter = ResultExporter(ctx.obj['out_dir'] / suite.suite_name)
    with _guarded('experiment', exporter):
        _write_run_config(ctx, exporter, 'experiment', suite=suite.to_dict(), realizations=realizations)
        console.print(f"\n[bold blue]Suite {suite.suite_name}[/bold blue] ({suite.kind}) {suite.description}")

        with Progress(SpinnerColumn(), TextColumn("{task.description}"), BarColumn(), console=console) as progress:
            task = progress.add_task("Running sweep points...", total=None)

            def cli_progress(idx: int, total: int, label: str) -> None:
                progress.update(task, description=f"Finished {label}", completed=idx, total=total)

            summary, table = run_suite(suite, exporter, seed=ctx.obj['seed'], jobs=ctx.obj['jobs'],
                                       realizations=realizations, progress_callback=cli_progress)
        write_suite_outputs(summary, table, exporter)

        totals = summary.totals
        console.print(f"\n[green]Suite complete[/green]: {totals['successes']} of {totals['points']} "
                      f"sweep points succeeded")
        _print_statistics(summary.statistics)
        console.print(f"Results written to: {exporter.out_dir}")

        failed = [r for r in summary.results if not r.success]
        if failed:
            for r in failed:
                console.print(f"  [red]✗ {r.label}: {r.error}[/red]")
            log_run_audit('experiment', False, suite=suite.suite_name, failures=len(failed))
            sys.exit(EXIT_NUMERICAL if any(r.numerical_failure for r in failed) else EXIT_USAGE)


def _print_statistics(statistics: dict) -> None:
    for metric, groups in statistics.items():
        if not groups or not all(isinstance(v, dict) for v in groups.values()):
            continue
        table = Table(title=metric, show_header=True, header_style="bold magenta")
        table.add_column("Group", style="cyan")
        table.add_column("Median", style="green")
        table.add_column("IQR")
        table.add_column("Mean")
        table.add_column("n")
        for group, stats in groups.items():
            table.add_row(group, f"{stats['median']:.4f}", f"{stats['q25']:.4f} - {stats['q75']:.4f}",
                          f"{stats['mean']:.4f}", str(stats['n']))
        console.print(table)


@cli.command()
def suites():
    """List available experiment suites."""
    console.print("\n[bold blue]Experiment Suites[/bold blue]\n")
    loader = get_suite_config_loader()

    names = loader.get_all_suites()
    if not names:
        console.print("[yellow]No experiment suites found[/yellow]")
        console.print(f"[yellow]Add YAML files to: {loader.config_dir}[/yellow]")
        return

    table = Table(show_header=True, header_style="bold magenta")
    table.add_column("Suite", style="cyan")
    table.add_column("Kind", style="green")
    table.add_column("Sweeps")
    table.add_column("Description")
    for name in names:
        suite = loader.get_config(name)
        sweeps = ", ".join(f"{s['param']} ({len(s['values'])})" for s in suite.sweeps) or "-"
        table.add_row(suite.suite_name, suite.kind, sweeps, suite.description)
    console.print(table)


@cli.command()
def check():
    """Verify the numerical stack and suite configuration."""
    console.print("\n[bold blue]System Check[/bold blue]\n")

    console.print("[cyan]Checking Python version...[/cyan]")
    version = sys.version_info
    if version >= (3, 10):
        console.print(f"  [green]✓[/green] Python {version.major}.{version.minor}.{version.micro}")
    else:
        console.print(f"  [red]✗[/red] Python {version.major}.{version.minor} (3.10+ required)")

    console.print("[cyan]Checking dependencies...[/cyan]")
    for name, import_name in [("numpy", "numpy"), ("scipy", "scipy"), ("scikit-learn", "sklearn"),
                              ("pandas", "pandas"), ("PyYAML", "yaml")]:
        try:
            module = __import__(import_name)
            console.print(f"  [green]✓[/green] {name} {getattr(module, '__version__', '')}")
        except ImportError:
            console.print(f"  [red]✗[/red] {name} (not installed)")

    console.print("[cyan]Checking seeded generator...[/cyan]")
    first = gen_cpd_dataset(CpdSynthSpec(D=3, d_s=2, d_n=1, n_epochs=4, epoch_len=10, seed=7))[0].data
    second = gen_cpd_dataset(CpdSynthSpec(D=3, d_s=2, d_n=1, n_epochs=4, epoch_len=10, seed=7))[0].data
    if np.array_equal(first, second):
        console.print("  [green]✓[/green] Reproducible datasets")
    else:
        console.print("  [red]✗[/red] Same seed produced different datasets")

    console.print("[cyan]Checking experiment suites...[/cyan]")
    count = len(get_suite_config_loader().get_all_suites())
    if count:
        console.print(f"  [green]✓[/green] {count} suites loaded")
    else:
        console.print("  [yellow]![/yellow] No experiment suites found")

    console.print("\n[green]System check complete[/green]\n")


def main():
    """Main entry point."""
    try:
        cli()
    except KeyboardInterrupt:
        console.print("\n[yellow]Cancelled by user[/yellow]")
        sys.exit(130)
    except Exception as e:
        console.print(f"\n[red]Error: {e}[/red]")
        logger.exception("Unhandled exception")
        sys.exit(1)


if __name__ == '__main__':
    main()
