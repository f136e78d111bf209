#!/usr/bin/env python3
"""CLI entry point for the traffic queue toolkit."""

import logging
import sys
from fractions import Fraction
from pathlib import Path

import click
import mpmath as mp

from traffic_queues.cli.charts import ChartKind, ChartSpec, render_chart
from traffic_queues.cli.output import OutputFormat, RunConfig, read_csv_rows, write_csv, write_json, write_rows
from traffic_queues.closedform import chi_closed, gumbel_pmf, linear_grid, strategy_table
from traffic_queues.config import get_config
from traffic_queues.model import ModelError, ModelParams, Schedule, parse_probability, parse_schedule
from traffic_queues.recognize import (
    IntPolynomial,
    RecognitionError,
    fit_int_poly,
    minimal_polynomial,
    quartic_to_nested_radical,
    read_points,
    rescale_scan,
)
from traffic_queues.simulate import Engine, Histogram, compare_distributions, monte_carlo
from traffic_queues.spectral import Arithmetic, NonConvergenceError, PrecisionPolicy, chi_spectral, exact_max_pmf


logging.basicConfig(
    level=logging.INFO,
    format='%(asctime)s - %(levelname)s - %(message)s',
    datefmt='%Y-%m-%d %H:%M:%S',
)
logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_NONCONVERGENCE = 2
EXIT_RECOGNITION = 3


class ProbabilityType(click.ParamType):
    """``a/b`` or decimal probability; exact-only variants reject decimals."""

    name = 'probability'

    def __init__(self, require_exact: bool = False):
        self.require_exact = require_exact

    def convert(self, value, param, ctx):
        if isinstance(value, (Fraction, float)):
            return value
        try:
            return parse_probability(value, require_exact=self.require_exact)
        except ModelError as e:
            self.fail(str(e), param, ctx)


class RunLengthType(click.ParamType):
    """Nonnegative integer that may be written in scientific notation (``1e6``)."""

    name = 'count'

    def convert(self, value, param, ctx):
        if isinstance(value, int):
            return value
        try:
            number = Fraction(value.strip())
        except (ValueError, ZeroDivisionError):
            self.fail(f'{value!r} is not a number', param, ctx)
        if number.denominator != 1 or number < 0:
            self.fail(f'{value!r} is not a nonnegative integer', param, ctx)
        return int(number)


PROBABILITY = ProbabilityType()
EXACT_PROBABILITY = ProbabilityType(require_exact=True)
RUN_LENGTH = RunLengthType()
FORMAT = click.Choice([f.value for f in OutputFormat])


def _schedule(ell: int | None, spec: str | None) -> Schedule:
    """``--schedule`` wins; ``--ell 0`` means random lights."""
    if spec is not None:
        return parse_schedule(spec)
    if ell is None:
        raise click.UsageError('Give --ell or --schedule')
    return Schedule.random_lights() if ell == 0 else Schedule.blocks(ell)


def _run_config() -> RunConfig:
    return RunConfig.from_context(click.get_current_context())


def _read_histogram(path: Path) -> Histogram:
    header, rows = read_csv_rows(path)
    if header != ['level', 'count']:
        raise click.BadParameter(f'{path} is not a level,count histogram')
    counts = {int(level): int(count) for level, count in rows}
    return Histogram(counts=counts, runs=sum(counts.values()))


def _table_rows(table) -> list[list]:
    return [[row.m, float(row.cdf), float(row.pmf)] for row in table.rows]


@click.group()
@click.option('--debug', is_flag=True, help='Enable debug logging')
def cli(debug: bool):
    """Traffic light queue toolkit: simulation, χ constants and recognition."""
    if debug:
        logging.getLogger().setLevel(logging.DEBUG)

    errors = get_config().validate()
    if errors:
        for error in errors:
            click.echo(f'Config error: {error}', err=True)
        sys.exit(EXIT_USAGE)


@cli.group()
def chi():
    """χ_ℓ(p) from closed forms or from the truncated-chain determinant."""


@chi.command('closed')
@click.option('--ell', type=click.IntRange(0, 3), required=True, help='Block length (0 = random lights)')
@click.option('--p', 'p', type=EXACT_PROBABILITY, required=True, help='Arrival probability, e.g. 1/3')
@click.option('--digits', default=50, show_default=True, help='Decimal digits to render')
@click.option('--out', type=click.Path(dir_okay=False, path_type=Path), help='Write JSON here instead of stdout')
def chi_closed_cmd(ell: int, p: Fraction, digits: int, out: Path | None):
    """Exact χ_ℓ(p) as a canonical radical form."""
    value = chi_closed(ell, p)
    write_json({'form': str(value), 'value': value.to_json_dict(digits)}, _run_config(), out)


@chi.command('spectral')
@click.option('--ell', type=click.IntRange(min=1), required=True, help='Block length')
@click.option('--p', 'p', type=EXACT_PROBABILITY, required=True, help='Arrival probability, e.g. 1/3')
@click.option('--k-max', default=200, show_default=True, help='Largest truncation level')
@click.option('--step', default=20, show_default=True, help='Spacing of truncation levels')
@click.option('--tol', default=1e-10, show_default=True, help='Relative agreement of the last two ratios')
@click.option('--guard-digits', type=int, help='Guard digits (default: TLQ_GUARD_DIGITS)')
@click.option('--workers', type=click.IntRange(min=1), help='Worker processes (default: TLQ_WORKERS)')
@click.option('--out', type=click.Path(dir_okay=False, path_type=Path), help='Write JSON here instead of stdout')
def chi_spectral_cmd(
    ell: int,
    p: Fraction,
    k_max: int,
    step: int,
    tol: float,
    guard_digits: int | None,
    workers: int | None,
    out: Path | None,
):
    """χ_ℓ(p) as the limit of (z_k - 1)(q/p)^{2k}."""
    policy = PrecisionPolicy(guard_digits=guard_digits) if guard_digits else PrecisionPolicy()
    config = _run_config()
    try:
        estimate = chi_spectral(ell, p, k_max=k_max, step=step, tol=tol, policy=policy, workers=workers)
    except NonConvergenceError as e:
        if e.estimate is not None:
            write_json({'estimate': e.estimate.model_dump()}, config, out)
        raise
    write_json({'estimate': estimate.model_dump()}, config, out)


@cli.command()
@click.option('--ell', type=click.IntRange(min=0), help='Block length (0 = random lights)')
@click.option('--schedule', 'schedule_spec', help='block:<l>, pattern:<RG word> or random')
@click.option('--p', 'p', type=PROBABILITY, required=True, help='Arrival probability')
@click.option('--n', 'n', type=RUN_LENGTH, required=True, help='Steps per queue, e.g. 1e6')
@click.option('--runs', type=RUN_LENGTH, default='1000', show_default=True, help='Independent queues')
@click.option('--seed', type=int, help='Base seed (default: TLQ_SEED)')
@click.option('--workers', type=click.IntRange(min=1), help='Worker processes (default: TLQ_WORKERS)')
@click.option('--engine', type=click.Choice([e.value for e in Engine]), default='auto', show_default=True)
@click.option('--out', type=click.Path(dir_okay=False, path_type=Path), help='Histogram CSV path')
@click.option('--summary', type=click.Path(dir_okay=False, path_type=Path), help='Summary JSON path')
def simulate(
    ell: int | None,
    schedule_spec: str | None,
    p: Fraction | float,
    n: int,
    runs: int,
    seed: int | None,
    workers: int | None,
    engine: str,
    out: Path | None,
    summary: Path | None,
):
    """Monte Carlo histogram of the maximum queue length M_n.

    The histogram CSV goes to --out and the summary JSON to --summary; either
    one left unset is written to stdout, histogram first.
    """
    schedule = _schedule(ell, schedule_spec)
    config = _run_config()
    result = monte_carlo(ModelParams(p=p), schedule, n, runs, seed=seed, workers=workers, engine=Engine(engine))
    write_csv(['level', 'count'], [list(r) for r in result.histogram.rows()], config, out)
    write_json({'summary': result.summary.model_dump()}, config, summary)


@cli.command()
@click.option('--ell', type=click.IntRange(0, 3), required=True, help='Block length (0 = random lights)')
@click.option('--p', 'p', type=PROBABILITY, required=True, help='Arrival probability')
@click.option('--n', 'n', type=RUN_LENGTH, required=True, help='Run length, e.g. 1e10')
@click.option('--format', 'fmt', type=FORMAT, default='csv', show_default=True)
@click.option('--out', type=click.Path(dir_okay=False, path_type=Path))
def predict(ell: int, p: Fraction | float, n: int, fmt: str, out: Path | None):
    """Gumbel-type prediction table m, cdf, pmf for M_n."""
    table = gumbel_pmf(ell, p, n)
    write_rows(
        OutputFormat(fmt),
        f'Gumbel law of M_n, ell={ell}, p={p}, n={n}',
        ['m', 'cdf', 'pmf'],
        _table_rows(table),
        _run_config(),
        out,
        payload={'table': table.model_dump(), 'mean': table.mean()},
    )


@cli.command()
@click.option('--ell', type=click.IntRange(min=0), help='Block length (0 = random lights)')
@click.option('--schedule', 'schedule_spec', help='block:<l>, pattern:<RG word> or random')
@click.option('--p', 'p', type=PROBABILITY, required=True, help='Arrival probability')
@click.option('--n', 'n', type=RUN_LENGTH, required=True, help='Run length')
@click.option('--arithmetic', type=click.Choice([a.value for a in Arithmetic]), default='auto', show_default=True)
@click.option('--format', 'fmt', type=FORMAT, default='csv', show_default=True)
@click.option('--out', type=click.Path(dir_okay=False, path_type=Path))
def exact(
    ell: int | None,
    schedule_spec: str | None,
    p: Fraction | float,
    n: int,
    arithmetic: str,
    fmt: str,
    out: Path | None,
):
    """Exact distribution of M_n from the truncated kernels."""
    schedule = _schedule(ell, schedule_spec)
    table = exact_max_pmf(p, schedule, n, Arithmetic(arithmetic))
    write_rows(
        OutputFormat(fmt),
        f'Exact law of M_n, {schedule.render()}, p={p}, n={n}',
        ['m', 'cdf', 'pmf'],
        _table_rows(table),
        _run_config(),
        out,
        payload={'table': table.model_dump()},
    )


@cli.command()
@click.option('--hist', 'hist_path', type=click.Path(exists=True, dir_okay=False, path_type=Path), required=True)
@click.option('--ell', type=click.IntRange(min=0), help='Block length (0 = random lights)')
@click.option('--schedule', 'schedule_spec', help='Schedule for the exact oracle')
@click.option('--p', 'p', type=PROBABILITY, required=True, help='Arrival probability')
@click.option('--n', 'n', type=RUN_LENGTH, required=True, help='Run length of the simulated queues')
@click.option('--source', type=click.Choice(['gumbel', 'exact']), default='gumbel', show_default=True)
@click.option('--out', type=click.Path(dir_okay=False, path_type=Path))
def compare(
    hist_path: Path,
    ell: int | None,
    schedule_spec: str | None,
    p: Fraction | float,
    n: int,
    source: str,
    out: Path | None,
):
    """Total variation and chi-square between a histogram and a prediction."""
    hist = _read_histogram(hist_path)
    if source == 'gumbel':
        if ell is None or ell > 3:
            raise click.UsageError('The Gumbel law needs --ell in 0..3')
        table = gumbel_pmf(ell, p, n)
    else:
        table = exact_max_pmf(p, _schedule(ell, schedule_spec), n)
    result = compare_distributions(hist, table)
    write_json(result.model_dump(), _run_config(), out)


@cli.group()
def recognize():
    """Recover exact structure from numbers."""


@recognize.command('minpoly')
@click.option('--value', required=True, help='High-precision decimal')
@click.option('--max-degree', default=4, show_default=True, type=click.IntRange(1, 8))
@click.option('--precision', type=int, help='Significant digits of the value (default: digits given)')
@click.option('--out', type=click.Path(dir_okay=False, path_type=Path))
def recognize_minpoly(value: str, max_degree: int, precision: int | None, out: Path | None):
    """Minimal integer polynomial of a decimal."""
    result = minimal_polynomial(value, max_degree=max_degree, precision=precision)
    write_json({'polynomial': str(result.polynomial), **result.to_json_dict()}, _run_config(), out)


@recognize.command('radical')
@click.option('--coeffs', required=True, help='Integer coefficients, ascending, comma separated')
@click.option('--radicand', 'D', type=click.IntRange(min=1), required=True, help='Square-free outer radicand D')
@click.option('--target', help='Pick the real root nearest this decimal')
@click.option('--digits', default=50, show_default=True)
@click.option('--out', type=click.Path(dir_okay=False, path_type=Path))
def recognize_radical(coeffs: str, D: int, target: str | None, digits: int, out: Path | None):
    """Nested-radical form of a root of a quadratic or quartic."""
    try:
        poly = IntPolynomial(coeffs=tuple(int(c) for c in coeffs.split(',')))
    except ValueError as e:
        raise click.BadParameter(f'Cannot parse coefficients {coeffs!r}') from e
    goal = None
    if target is not None:
        with mp.workdps(digits):
            goal = mp.mpf(target)
    value = quartic_to_nested_radical(poly, D, target=goal)
    write_json({'form': str(value), 'value': value.to_json_dict(digits)}, _run_config(), out)


@recognize.command('fit')
@click.option('--points', 'points_path', type=click.Path(exists=True, dir_okay=False, path_type=Path), required=True)
@click.option('--max-degree', default=16, show_default=True)
@click.option('--rescale', is_flag=True, help='Repair points whose common factors cancelled')
@click.option('--max-multiplier', default=100, show_default=True)
@click.option('--out', type=click.Path(dir_okay=False, path_type=Path))
def recognize_fit(points_path: Path, max_degree: int, rescale: bool, max_multiplier: int, out: Path | None):
    """Exact integer polynomial through x,y points."""
    points = read_points(points_path)
    if rescale:
        report = rescale_scan(points, max_multiplier=max_multiplier, max_degree=max_degree)
    else:
        report = fit_int_poly(points, max_degree=max_degree)
    payload = {'polynomial': report.polynomial.render('x'), **report.to_json_dict()}
    if report.diagnostics:
        payload['diagnostics'] = [d.model_dump() for d in report.diagnostics]
    write_json(payload, _run_config(), out)


@cli.command()
@click.option('--n', 'n', type=RUN_LENGTH, default='1e10', show_default=True)
@click.option('--p-min', default=0.15, show_default=True)
@click.option('--p-max', default=0.41, show_default=True)
@click.option('--points', default=100, show_default=True)
@click.option('--format', 'fmt', type=FORMAT, default='csv', show_default=True)
@click.option('--out', type=click.Path(dir_okay=False, path_type=Path))
def strategy(n: int, p_min: float, p_max: float, points: int, fmt: str, out: Path | None):
    """Expected maxima E_0..E_3 over a grid of p."""
    rows = strategy_table(linear_grid(p_min, p_max, points), n)
    write_rows(
        OutputFormat(fmt),
        f'Expected maxima, n={n}',
        ['p', 'E0', 'E1', 'E2', 'E3'],
        [[r.p, r.E0, r.E1, r.E2, r.E3] for r in rows],
        _run_config(),
        out,
    )


@cli.command()
@click.option('--kind', type=click.Choice(['histogram', 'strategy']), required=True)
@click.option('--hist', 'hist_path', type=click.Path(exists=True, dir_okay=False, path_type=Path))
@click.option('--ell', type=click.IntRange(0, 3), help='Block length for the predicted overlay')
@click.option('--p', 'p', type=PROBABILITY, help='Arrival probability for the predicted overlay')
@click.option('--n', 'n', type=RUN_LENGTH, default='1e10', show_default=True)
@click.option('--p-min', default=0.15, show_default=True)
@click.option('--p-max', default=0.41, show_default=True)
@click.option('--points', default=100, show_default=True)
@click.option('--out', type=click.Path(dir_okay=False, path_type=Path), required=True)
def plot(
    kind: str,
    hist_path: Path | None,
    ell: int | None,
    p: Fraction | float | None,
    n: int,
    p_min: float,
    p_max: float,
    points: int,
    out: Path,
):
    """SVG chart: histogram with predicted pmf, or expected-maximum curves."""
    config = _run_config()
    if kind == 'histogram':
        if hist_path is None:
            raise click.UsageError('--kind histogram needs --hist')
        hist = _read_histogram(hist_path)
        series = {'empirical': [(float(m), hist.frequency(m)) for m in hist.levels]}
        title = 'Maximum queue length'
        if ell is not None and p is not None:
            series['predicted'] = [(float(m), pmf) for m, pmf in gumbel_pmf(ell, p, n).pmf_map().items()]
            title = f'Maximum queue length, ell={ell}, p={p}, n={n}'
        spec = ChartSpec(
            kind=ChartKind.HISTOGRAM_OVERLAY,
            series=series,
            title=title,
            xlabel='M_n',
            ylabel='probability',
            description=config.to_json(),
        )
    else:
        rows = strategy_table(linear_grid(p_min, p_max, points), n)
        spec = ChartSpec(
            kind=ChartKind.LINE_FAMILY,
            series={f'E{ell_}': [(r.p, r.values[ell_]) for r in rows] for ell_ in range(4)},
            title=f'Expected maxima, n={n}',
            xlabel='p',
            ylabel='E[M_n]',
            description=config.to_json(),
        )
    out.write_text(render_chart(spec))


def main(argv: list[str] | None = None) -> int:
    """Run the CLI and map failures to exit codes.

    0 success, 1 usage or validation error, 2 numeric non-convergence,
    3 recognition failure.
    """
    try:
        result = cli.main(args=argv, prog_name='tlq', standalone_mode=False)
    except click.ClickException as e:
        e.show()
        return EXIT_USAGE
    except click.exceptions.Abort:
        click.echo('Aborted!', err=True)
        return EXIT_USAGE
    except ValueError as e:
        click.echo(f'Error: {e}', err=True)
        return EXIT_USAGE
    except NonConvergenceError as e:
        click.echo(f'Error: {e}', err=True)
        return EXIT_NONCONVERGENCE
    except RecognitionError as e:
        click.echo(f'Error: {e}', err=True)
        return EXIT_RECOGNITION
    except SystemExit as e:
        return e.code if isinstance(e.code, int) else EXIT_USAGE
    return result if isinstance(result, int) else EXIT_OK


if __name__ == '__main__':
    sys.exit(main())
