#!/usr/bin/env python3
"""Regenerate the histogram overlays and the strategy chart as SVG.

Histograms compare simulated M_n with the Gumbel-type law for ℓ in {2, 3}
and p in {1/5, 1/3}. The run counts are desk-sized; pass ``--runs 100000``
and ``--n 1000000`` for publication-scale histograms.
"""

import argparse
import json
from fractions import Fraction
from pathlib import Path

from traffic_queues.cli.charts import ChartKind, ChartSpec, render_chart
from traffic_queues.cli.output import RunConfig
from traffic_queues.closedform import gumbel_pmf, linear_grid, strategy_table
from traffic_queues.model import ModelParams, Schedule
from traffic_queues.simulate import compare_distributions, monte_carlo


CASES = [(2, Fraction(1, 5)), (2, Fraction(1, 3)), (3, Fraction(1, 5)), (3, Fraction(1, 3))]


def histogram_figure(ell: int, p: Fraction, n: int, runs: int, seed: int, out_dir: Path) -> dict:
    """Simulate one case, write its overlay SVG and return the comparison metrics."""
    result = monte_carlo(ModelParams(p=p, ell=ell), Schedule.blocks(ell), n, runs, seed=seed)
    table = gumbel_pmf(ell, p, n)
    comparison = compare_distributions(result.histogram, table)

    config = RunConfig(command='reproduce_figures histogram', options={'ell': ell, 'p': str(p), 'n': n, 'runs': runs})
    hist = result.histogram
    spec = ChartSpec(
        kind=ChartKind.HISTOGRAM_OVERLAY,
        series={
            'empirical': [(float(m), hist.frequency(m)) for m in hist.levels],
            'predicted': [(float(m), pmf) for m, pmf in table.pmf_map().items()],
        },
        title=f'Maximum queue length, ell={ell}, p={p}, n={n}',
        xlabel='M_n',
        ylabel='probability',
        description=config.to_json(),
    )
    name = f'hist_ell{ell}_p{p.numerator}_{p.denominator}.svg'
    (out_dir / name).write_text(render_chart(spec))
    return {'file': name, 'mean': result.summary.mean, 'predicted_mean': table.mean(), 'tv': comparison.tv}


def strategy_figure(n: int, out_dir: Path) -> str:
    rows = strategy_table(linear_grid(0.15, 0.41, 100), n)
    config = RunConfig(command='reproduce_figures strategy', options={'n': n})
    spec = ChartSpec(
        kind=ChartKind.LINE_FAMILY,
        series={f'E{ell}': [(r.p, r.values[ell]) for r in rows] for ell in range(4)},
        title=f'Expected maxima, n={n}',
        xlabel='p',
        ylabel='E[M_n]',
        description=config.to_json(),
    )
    name = 'strategy.svg'
    (out_dir / name).write_text(render_chart(spec))
    return name


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument('--n', type=int, default=100_000)
    parser.add_argument('--runs', type=int, default=2_000)
    parser.add_argument('--seed', type=int, default=0)
    parser.add_argument('--out-dir', type=Path, default=Path('figures'))
    args = parser.parse_args()

    args.out_dir.mkdir(parents=True, exist_ok=True)
    print(f'Writing figures to {args.out_dir}')

    metrics = []
    for ell, p in CASES:
        row = histogram_figure(ell, p, args.n, args.runs, args.seed, args.out_dir)
        metrics.append(row)
        print(f'  {row["file"]:28} mean {row["mean"]:8.3f}  predicted {row["predicted_mean"]:8.3f}  tv {row["tv"]:.4f}')

    print(f'  {strategy_figure(10**10, args.out_dir)}')
    (args.out_dir / 'metrics.json').write_text(json.dumps(metrics, indent=2) + '\n')


if __name__ == '__main__':
    main()
