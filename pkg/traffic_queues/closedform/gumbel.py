"""Gumbel-type law of the maximum queue length and the expected maxima it implies.

For ℓ >= 1 the law reads P{M_n <= m} ≈ exp(-(χ_ℓ/(2ℓ))·n·(p^2/q^2)^m), a
discretised Gumbel distribution with scale 1/ln(q^2/p^2). Random lights
(ℓ = 0) move one step at a time, so the base becomes q/p and the prefactor
χ_0·n/2. The periodic fluctuation terms are dropped; their amplitude is
small and of period one in log n.
"""

import logging
from fractions import Fraction

import mpmath as mp
from scipy import stats

from traffic_queues.closedform.chi import SUPPORTED_ELLS, chi_closed, chi_float
from traffic_queues.closedform.models import PredictionRow, PredictionTable, StrategyRow
from traffic_queues.model import ModelError


logger = logging.getLogger(__name__)

CONSTANT_DIGITS = 200
TAIL_TOLERANCE = 1e-12
MAX_LEVELS = 100_000


class UnsupportedRegimeError(ModelError):
    """Raised for quantities that have no known formula in the requested regime."""

    def __init__(self, message: str, ell: int):
        super().__init__(message)
        self.ell = ell


def _check(ell: int, p: Fraction | float, n: int) -> None:
    if ell not in SUPPORTED_ELLS:
        raise ModelError(f'No Gumbel law for ell = {ell}; supported: {SUPPORTED_ELLS}')
    if not 0 < p < Fraction(1, 2):
        raise ModelError(f'Gumbel law needs 0 < p < 1/2, got {p}')
    if n < 2:
        raise ModelError(f'n must be at least 2, got {n}')


def _chi(ell: int, p: Fraction | float, digits: int) -> mp.mpf:
    if isinstance(p, Fraction):
        return chi_closed(ell, p).to_mpf(digits)
    return chi_float(ell, p, digits)


def _as_mpf(p: Fraction | float) -> mp.mpf:
    if isinstance(p, Fraction):
        return mp.mpf(p.numerator) / p.denominator
    return mp.mpf(p)


def gumbel_parameters(ell: int, p: Fraction | float, n: int) -> tuple[float, float]:
    """(loc, scale) of the continuous Gumbel law behind the CDF of M_n.

    cdf(m) = exp(-exp(-(m - loc)/scale)) with scale = 1/L and
    loc = ln(n·χ/(2ℓ))/L, where L = ln(q^2/p^2); for ℓ = 0, L = ln(q/p)
    and loc = ln(n·χ_0/2)/L.
    """
    _check(ell, p, n)
    with mp.workdps(30):
        pp = _as_mpf(p)
        chi = _chi(ell, p, 30)
        if ell == 0:
            rate = mp.log((1 - pp) / pp)
            loc = mp.log(n * chi / 2) / rate
        else:
            rate = 2 * mp.log((1 - pp) / pp)
            loc = mp.log(n * chi / (2 * ell)) / rate
        return float(loc), float(1 / rate)


def gumbel_cdf(ell: int, p: Fraction | float, n: int, m: int) -> float:
    """Asymptotic P{M_n <= m}.

    Args:
        ell: Block length, or 0 for random lights.
        p: Arrival probability in (0, 1/2).
        n: Run length, at least 2.
        m: Level.

    Returns:
        Probability in [0, 1], nondecreasing in m.
    """
    loc, scale = gumbel_parameters(ell, p, n)
    return float(stats.gumbel_r.cdf(m, loc=loc, scale=scale))


def gumbel_pmf(ell: int, p: Fraction | float, n: int, tolerance: float = TAIL_TOLERANCE) -> PredictionTable:
    """Discretised law of M_n on m = 0, 1, ... until the CDF passes 1 - tolerance.

    The pmf is the first difference of the CDF with pmf(0) = cdf(0), so
    cumulative sums of the rows reproduce the CDF column.
    """
    loc, scale = gumbel_parameters(ell, p, n)
    rows: list[PredictionRow] = []
    previous = 0.0
    for m in range(MAX_LEVELS):
        cdf = float(stats.gumbel_r.cdf(m, loc=loc, scale=scale))
        rows.append(PredictionRow(m=m, cdf=cdf, pmf=max(cdf - previous, 0.0)))
        previous = cdf
        if cdf > 1 - tolerance:
            break
    logger.debug(f'gumbel_pmf(ell={ell}, p={p}, n={n}): {len(rows)} levels, loc={loc:.4f}')
    return PredictionTable(ell=ell, p=str(p), n=n, source='gumbel', rows=rows, tail_tolerance=tolerance)


def expected_max_decimal(ell: int, p: Fraction | float, n: int, digits: int = 50) -> mp.mpf:
    """E_ℓ(n, p) at ``digits`` significant digits.

    ℓ >= 1: (ln n + γ + ln(χ_ℓ/(2ℓ)))/ln(q^2/p^2) + 1/2.
    ℓ = 0: (ln(n/2) + γ + ln χ_0)/ln(q/p) + 1/2.
    """
    _check(ell, p, n)
    with mp.workdps(max(digits, CONSTANT_DIGITS) + 10):
        pp = _as_mpf(p)
        chi = _chi(ell, p, max(digits, CONSTANT_DIGITS))
        if ell == 0:
            rate = mp.log((1 - pp) / pp)
            value = (mp.log(mp.mpf(n) / 2) + mp.euler + mp.log(chi)) / rate + mp.mpf(1) / 2
        else:
            rate = 2 * mp.log((1 - pp) / pp)
            value = (mp.log(n) + mp.euler + mp.log(chi / (2 * ell))) / rate + mp.mpf(1) / 2
    with mp.workdps(digits):
        return +value


def expected_max(ell: int, p: Fraction | float, n: int) -> float:
    """E_ℓ(n, p) in double precision."""
    return float(expected_max_decimal(ell, p, n, digits=20))


def variance_max(ell: int, p: Fraction | float) -> float:
    """Asymptotic Var(M_n) = π^2/(6·ln^2(q^2/p^2)) + 1/12 for one-step blocks.

    Raises:
        UnsupportedRegimeError: For ell != 1.
    """
    if ell != 1:
        raise UnsupportedRegimeError(f'Variance of M_n is only known for ell = 1, got {ell}', ell)
    if not 0 < p < Fraction(1, 2):
        raise ModelError(f'Variance needs 0 < p < 1/2, got {p}')
    with mp.workdps(30):
        rate = 2 * mp.log((1 - _as_mpf(p)) / _as_mpf(p))
        return float(mp.pi**2 / (6 * rate**2) + mp.mpf(1) / 12)


def strategy_table(p_grid: list[Fraction | float], n: int) -> list[StrategyRow]:
    """Expected maxima E_0..E_3 for every grid point.

    Args:
        p_grid: Arrival probabilities in (0, 1/2).
        n: Run length.

    Returns:
        One StrategyRow per grid point, in grid order.
    """
    rows = []
    for p in p_grid:
        values = {f'E{ell}': expected_max(ell, p, n) for ell in SUPPORTED_ELLS}
        rows.append(StrategyRow(p=float(p), **values))
    best = sum(1 for row in rows if min(row.values.values()) == row.E1)
    logger.info(f'strategy_table: {len(rows)} points, n={n}; one-step blocks best at {best}')
    return rows


def linear_grid(low: float, high: float, points: int) -> list[float]:
    """Evenly spaced grid with both ends included."""
    if points < 1:
        raise ModelError(f'Grid needs at least one point, got {points}')
    if points == 1:
        return [low]
    step = (high - low) / (points - 1)
    return [low + i * step for i in range(points)]

