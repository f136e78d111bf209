"""Exact finite-n distribution of the maximum queue length.

P{M_n <= k} is the mass that survives n steps of the truncated kernels
(Red: U_k, Green: V_k, random lights: (U_k + V_k)/2) applied in schedule
order to unit mass at level 0. An arrival at level k leaves the chain.
"""

import logging
from enum import Enum
from fractions import Fraction

import numpy as np

from traffic_queues.closedform.models import PredictionRow, PredictionTable
from traffic_queues.config import get_config
from traffic_queues.model import ModelError, Phase, Schedule


logger = logging.getLogger(__name__)

TAIL_TOLERANCE = 1e-12


class Arithmetic(str, Enum):
    """How ``exact_max_cdf`` evaluates the chain."""

    AUTO = 'auto'  # rational for Fraction p within the step limit, float otherwise
    RATIONAL = 'rational'
    FLOAT = 'float'


def _step_weights(p: Fraction, phase: Phase | None) -> tuple[int, int, int, int]:
    """(up, stay, down, scale): integer transition weights of one step over a common scale."""
    a, b = p.numerator, p.denominator
    if phase is Phase.RED:
        return a, b - a, 0, b
    if phase is Phase.GREEN:
        return 0, a, b - a, b
    return a, b, b - a, 2 * b


def _advance(mass: list[int], weights: tuple[int, int, int, int]) -> list[int]:
    """One step of integer-scaled mass; mass above the last level is dropped."""
    up, stay, down, _ = weights
    k = len(mass) - 1
    new = [0] * (k + 1)
    for i, w in enumerate(mass):
        if not w:
            continue
        new[i] += stay * w
        if i < k:
            new[i + 1] += up * w
        if i > 0:
            new[i - 1] += down * w
        else:
            new[0] += down * w
    return new


def _phases(schedule: Schedule) -> tuple[Phase | None, ...]:
    return (None,) if schedule.is_random else schedule.phases


def _cdf_rational(p: Fraction, schedule: Schedule, n: int, k: int) -> Fraction:
    phases = _phases(schedule)
    weights = [_step_weights(p, phase) for phase in phases]
    mass = [1] + [0] * k
    denominator = 1
    for i in range(n):
        w = weights[i % len(weights)]
        mass = _advance(mass, w)
        denominator *= w[3]
    return Fraction(sum(mass), denominator)


def _float_kernel(k: int, p: float, phase: Phase | None) -> np.ndarray:
    """Dense kernel; p = 0 and p = 1 are allowed here, unlike the exact kernels."""
    q = 1.0 - p
    kernel = np.zeros((k + 1, k + 1))
    idx = np.arange(k + 1)
    if phase is Phase.RED or phase is None:
        red = np.zeros_like(kernel)
        red[idx, idx] = q
        red[idx[:-1], idx[:-1] + 1] = p
        kernel += red if phase is Phase.RED else red / 2
    if phase is Phase.GREEN or phase is None:
        green = np.zeros_like(kernel)
        green[0, 0] = 1.0
        green[idx[1:], idx[1:] - 1] = q
        green[idx[1:], idx[1:]] = p
        kernel += green if phase is Phase.GREEN else green / 2
    return kernel


def _cdf_float(p: Fraction | float, schedule: Schedule, n: int, k: int) -> float:
    kernels = [_float_kernel(k, float(p), phase) for phase in _phases(schedule)]
    period = np.eye(k + 1)
    for kernel in kernels:
        period = period @ kernel
    cycles, rest = divmod(n, len(kernels))
    mass = np.zeros(k + 1)
    mass[0] = 1.0
    mass = mass @ np.linalg.matrix_power(period, cycles)
    for kernel in kernels[:rest]:
        mass = mass @ kernel
    return float(np.clip(mass.sum(), 0.0, 1.0))


def exact_max_cdf(
    p: Fraction | float,
    schedule: Schedule,
    n: int,
    k: int,
    arithmetic: Arithmetic = Arithmetic.AUTO,
) -> Fraction | float:
    """P{M_n <= k} by propagating mass through the truncated kernels.

    Args:
        p: Arrival probability in [0, 1].
        schedule: Light schedule.
        n: Steps, >= 0.
        k: Level, >= 0.
        arithmetic: RATIONAL (exact Fraction, needs rational p and
            n <= exact_step_limit), FLOAT (numpy matrix powers) or AUTO.
            Rational mode carries integers of about n·log2(1/p) bits through
            n steps, so its cost grows like n^2 per level.

    Returns:
        Fraction in rational mode, float in float mode.
    """
    if n < 0 or k < 0:
        raise ModelError(f'n and k must be nonnegative, got n={n}, k={k}')
    if not 0 <= p <= 1:
        raise ModelError(f'p must be a probability, got {p}')
    if n == 0:
        return Fraction(1) if isinstance(p, Fraction) and arithmetic is not Arithmetic.FLOAT else 1.0

    limit = get_config().exact_step_limit
    if arithmetic is Arithmetic.AUTO:
        arithmetic = Arithmetic.RATIONAL if isinstance(p, Fraction) and n <= limit else Arithmetic.FLOAT
    if arithmetic is Arithmetic.RATIONAL:
        if not isinstance(p, Fraction):
            raise ModelError(f'Rational mode needs an exact p, got {p!r}')
        if n > limit:
            raise ModelError(f'Rational mode is limited to n <= {limit} (TLQ_EXACT_STEP_LIMIT), got n={n}')
        return _cdf_rational(p, schedule, n, k)
    return _cdf_float(p, schedule, n, k)


def exact_max_pmf(
    p: Fraction | float,
    schedule: Schedule,
    n: int,
    arithmetic: Arithmetic = Arithmetic.AUTO,
    tolerance: float = TAIL_TOLERANCE,
) -> PredictionTable:
    """Distribution of M_n from differences of ``exact_max_cdf``.

    Levels run from 0 up to the number of Red steps in 1..n, the largest
    possible maximum, or stop earlier once the remaining tail is below
    ``tolerance``; the last row then carries the whole tail, so the pmf sums
    to exactly 1 in rational mode.

    Each level is a separate propagation over n steps. In rational mode
    that is quadratic in n per level, which is why AUTO switches to float
    arithmetic above TLQ_EXACT_STEP_LIMIT.
    """
    top = schedule.red_count(n)
    rows: list[PredictionRow] = []
    previous: Fraction | float = 0
    for k in range(top + 1):
        cdf = exact_max_cdf(p, schedule, n, k, arithmetic)
        if k == top or 1 - cdf < tolerance:
            one = Fraction(1) if isinstance(cdf, Fraction) else 1.0
            rows.append(PredictionRow(m=k, cdf=one, pmf=one - previous))
            break
        rows.append(PredictionRow(m=k, cdf=cdf, pmf=cdf - previous))
        previous = cdf
    logger.debug(f'exact_max_pmf(p={p}, {schedule.render()}, n={n}): {len(rows)} levels')
    return PredictionTable(
        ell=schedule.block_length if schedule.is_blocks else (0 if schedule.is_random else None),
        p=str(p),
        n=n,
        source='exact',
        rows=rows,
        tail_tolerance=tolerance,
    )
