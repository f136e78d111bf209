"""Goodness of fit between simulated maxima and predicted distributions."""

import logging

from scipy import stats

from traffic_queues.closedform.models import PredictionTable
from traffic_queues.simulate.models import DistributionComparison, Histogram, LevelResidual


logger = logging.getLogger(__name__)

MIN_EXPECTED = 5.0
PMF_SUM_TOLERANCE = 1e-9


class EmptyHistogramError(ValueError):
    """Raised when comparing a histogram without runs."""


def _bins(levels: list[int], expected: dict[int, float], observed: dict[int, int]) -> list[tuple[float, int]]:
    """Greedy left-to-right pooling of adjacent levels until each bin expects >= 5 counts."""
    bins: list[tuple[float, int]] = []
    acc_e, acc_o = 0.0, 0
    for level in levels:
        acc_e += expected.get(level, 0.0)
        acc_o += observed.get(level, 0)
        if acc_e >= MIN_EXPECTED:
            bins.append((acc_e, acc_o))
            acc_e, acc_o = 0.0, 0
    if bins and (acc_e > 0 or acc_o > 0):
        last_e, last_o = bins[-1]
        bins[-1] = (last_e + acc_e, last_o + acc_o)
    return bins


def compare_distributions(hist: Histogram, pmf: PredictionTable | dict[int, float]) -> DistributionComparison:
    """Total variation, chi-square and per-level residuals.

    TV = (1/2) Σ_m |hist_m/runs - pmf_m| over the union of supports. The
    chi-square statistic pools adjacent levels so every bin expects at least
    five counts.

    Args:
        hist: Empirical histogram.
        pmf: Predicted pmf, as a table or a level -> probability mapping.

    Returns:
        DistributionComparison.

    Raises:
        EmptyHistogramError: If the histogram has no runs.
        ValueError: If the pmf does not sum to 1 within tolerance.
    """
    if hist.runs == 0:
        raise EmptyHistogramError('Cannot compare an empty histogram')

    probs = pmf.pmf_map() if isinstance(pmf, PredictionTable) else {m: float(v) for m, v in pmf.items()}
    total = sum(probs.values())
    if abs(total - 1.0) > PMF_SUM_TOLERANCE:
        raise ValueError(f'Predicted pmf sums to {total}, not 1')

    runs = hist.runs
    levels = sorted(set(probs) | set(hist.counts))
    expected = {m: runs * probs.get(m, 0.0) for m in levels}

    tv = 0.5 * sum(abs(hist.frequency(m) - probs.get(m, 0.0)) for m in levels)
    per_level = [
        LevelResidual(
            level=m,
            observed=hist.counts.get(m, 0),
            expected=expected[m],
            residual=hist.counts.get(m, 0) - expected[m],
        )
        for m in levels
    ]

    bins = _bins(levels, expected, hist.counts)
    chi_square = sum((o - e) ** 2 / e for e, o in bins)
    dof = len(bins) - 1
    p_value = float(stats.chi2.sf(chi_square, dof)) if dof > 0 else 1.0
    logger.debug(f'compare: TV={tv:.5f} chi2={chi_square:.3f} dof={dof} p={p_value:.4g}')

    return DistributionComparison(
        tv=tv,
        chi_square=float(chi_square),
        dof=dof,
        p_value=p_value,
        per_level=per_level,
    )
