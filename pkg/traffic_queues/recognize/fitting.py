"""Exact integer-polynomial regression on (x, y) data and common-factor repair."""

import csv
import logging
import math
from fractions import Fraction
from itertools import combinations
from pathlib import Path

from traffic_queues.recognize.models import FitReport, GrowthDiagnostic, IntPolynomial, RecognitionError


logger = logging.getLogger(__name__)

MAX_CORRUPTED = 2


class NoIntegerFitError(RecognitionError):
    """Raised when no integer polynomial up to ``degree`` fits every point."""

    def __init__(self, message: str, degree: int):
        super().__init__(message)
        self.degree = degree


class InsufficientPointsError(RecognitionError):
    """Raised when too few points remain to verify a fit of ``degree`` on holdouts."""

    def __init__(self, message: str, degree: int):
        super().__init__(message)
        self.degree = degree


class NoRescaledFitError(RecognitionError):
    """Raised when no multipliers within the search bounds make the data fit."""


Point = tuple[int, int]


def _newton_coefficients(points: list[Point]) -> list[Fraction]:
    """Monomial coefficients (ascending) of the interpolating polynomial, in exact arithmetic."""
    xs = [Fraction(x) for x, _ in points]
    divided = [Fraction(y) for _, y in points]
    n = len(points)
    for level in range(1, n):
        for i in range(n - 1, level - 1, -1):
            divided[i] = (divided[i] - divided[i - 1]) / (xs[i] - xs[i - level])

    coeffs = [Fraction(0)] * n
    # Horner on the Newton form: P = d0 + (x - x0)(d1 + (x - x1)(...))
    for i in range(n - 1, -1, -1):
        shifted = [Fraction(0)] + coeffs[:-1]
        coeffs = [s - xs[i] * c for s, c in zip(shifted, coeffs, strict=True)]
        coeffs[0] += divided[i]
    return coeffs


def _evaluate(coeffs: list[Fraction], x: int) -> Fraction:
    acc = Fraction(0)
    for c in reversed(coeffs):
        acc = acc * x + c
    return acc


def _check_points(points: list[Point]) -> None:
    xs = [x for x, _ in points]
    if len(set(xs)) != len(xs):
        raise ValueError('Regression points must have pairwise distinct x')


def fit_int_poly(points: list[Point], max_degree: int = 16) -> FitReport:
    """Lowest-degree integer polynomial through every point, verified on holdouts.

    For d = 0..max_degree the polynomial interpolating the first d + 1 points
    is computed exactly; it is accepted when its coefficients are integers
    and it reproduces all remaining points. At least two holdout points are
    required to claim a degree.

    Args:
        points: (x, y) integer pairs with distinct x.
        max_degree: Largest degree tried.

    Returns:
        FitReport with zero holdout residuals and unit multipliers.

    Raises:
        InsufficientPointsError: If fewer than d + 2 points are left for the next degree.
        NoIntegerFitError: If no degree up to max_degree fits.
    """
    if len(points) < 2:
        raise InsufficientPointsError(f'Need at least 2 points, got {len(points)}', degree=0)
    _check_points(points)

    for degree in range(max_degree + 1):
        if len(points) < degree + 2:
            raise InsufficientPointsError(
                f'Degree {degree} needs {degree + 2} points for holdout verification, got {len(points)}',
                degree=degree,
            )
        used, holdout = points[: degree + 1], points[degree + 1 :]
        coeffs = _newton_coefficients(used)
        if any(c.denominator != 1 for c in coeffs):
            continue
        residuals = [y - _evaluate(coeffs, x) for x, y in holdout]
        if all(r == 0 for r in residuals):
            poly = IntPolynomial(coeffs=tuple(int(c) for c in coeffs))
            logger.debug(f'fit_int_poly: degree {poly.degree} through {len(used)} points, {len(holdout)} holdouts')
            return FitReport(
                polynomial=poly,
                points_used=list(used),
                holdout_residuals=[int(r) for r in residuals],
                multipliers=[1] * len(points),
            )

    raise NoIntegerFitError(
        f'No integer polynomial of degree <= {max_degree} fits {len(points)} points',
        degree=max_degree,
    )


def growth_diagnostics(points: list[Point]) -> list[GrowthDiagnostic]:
    """log10|y| per point and its deviation from the line through both neighbours, in x order."""
    ordered = sorted(points)
    logs = [math.log10(abs(y)) if y else None for _, y in ordered]
    diagnostics = []
    for i, (x, _) in enumerate(ordered):
        deviation = None
        if 0 < i < len(ordered) - 1 and None not in (logs[i - 1], logs[i], logs[i + 1]):
            (x0, _), (x1, _) = ordered[i - 1], ordered[i + 1]
            expected = logs[i - 1] + (logs[i + 1] - logs[i - 1]) * (x - x0) / (x1 - x0)
            deviation = logs[i] - expected
        diagnostics.append(GrowthDiagnostic(x=x, log10_abs_y=logs[i], deviation=deviation))
    return diagnostics


def _leave_out_fits(points: list[Point], max_multiplier: int, max_degree: int, max_corrupted: int):
    """Yield (degree, corrections, multipliers, report) for fits that repair up to ``max_corrupted`` points."""
    indices = range(len(points))
    for count in range(1, max_corrupted + 1):
        for suspects in combinations(indices, count):
            rest = [points[i] for i in indices if i not in suspects]
            try:
                report = fit_int_poly(rest, max_degree)
            except RecognitionError:
                continue
            multipliers = [1] * len(points)
            for i in suspects:
                x, y = points[i]
                if y == 0:
                    break
                factor = Fraction(report.polynomial(x), y)
                if factor.denominator != 1 or not 1 <= factor <= max_multiplier:
                    break
                multipliers[i] = int(factor)
            else:
                logger.debug(f'rescale_scan: points {suspects} repaired with {[multipliers[i] for i in suspects]}')
                yield report.polynomial.degree, count, multipliers, report


def _uniform_fit(points: list[Point], max_multiplier: int, max_degree: int) -> tuple[int, FitReport] | None:
    """Rational fit of all points whose coefficient denominators clear with one multiplier."""
    for degree in range(max_degree + 1):
        if len(points) < degree + 2:
            return None
        coeffs = _newton_coefficients(points[: degree + 1])
        if any(_evaluate(coeffs, x) != y for x, y in points[degree + 1 :]):
            continue
        factor = math.lcm(*(c.denominator for c in coeffs))
        if factor > max_multiplier:
            return None
        scaled = [(x, y * factor) for x, y in points]
        return factor, fit_int_poly(scaled, max_degree)
    return None


def rescale_scan(
    points: list[Point],
    max_multiplier: int = 100,
    max_degree: int = 16,
    max_corrupted: int = MAX_CORRUPTED,
) -> FitReport:
    """Integer-polynomial fit after undoing common-factor cancellations.

    Regression data taken from reduced fractions can have individual values
    divided by a factor that cancelled in that instance. The scan first tries
    a plain fit, then leaves out up to ``max_corrupted`` points, fits the
    rest, and accepts when each left-out y times an integer multiplier in
    [1, max_multiplier] lands on the polynomial. Solutions are ordered by
    degree, then number of repaired points, then multipliers. As a fallback
    every point may share one multiplier.

    Args:
        points: (x, y) integer pairs with distinct x.
        max_multiplier: Largest multiplier tried.
        max_degree: Largest degree tried.
        max_corrupted: Largest number of repaired points.

    Returns:
        FitReport with per-point multipliers and semi-log growth diagnostics.

    Raises:
        NoRescaledFitError: If nothing within the bounds fits.
    """
    if max_multiplier < 1:
        raise ValueError(f'max_multiplier must be at least 1, got {max_multiplier}')
    _check_points(points)
    diagnostics = growth_diagnostics(points)

    try:
        report = fit_int_poly(points, max_degree)
        return report.model_copy(update={'diagnostics': diagnostics})
    except RecognitionError:
        pass

    candidates = sorted(
        _leave_out_fits(points, max_multiplier, max_degree, max_corrupted),
        key=lambda c: (c[0], c[1], c[2]),
    )
    if candidates:
        _, _, multipliers, _ = candidates[0]
        repaired = [(x, y * m) for (x, y), m in zip(points, multipliers, strict=True)]
        report = fit_int_poly(repaired, max_degree)
        logger.info(f'rescale_scan: degree {report.polynomial.degree} after multipliers {multipliers}')
        return report.model_copy(update={'multipliers': multipliers, 'diagnostics': diagnostics})

    uniform = _uniform_fit(points, max_multiplier, max_degree)
    if uniform is not None:
        factor, report = uniform
        logger.info(f'rescale_scan: uniform multiplier {factor}')
        return report.model_copy(update={'multipliers': [factor] * len(points), 'diagnostics': diagnostics})

    raise NoRescaledFitError(
        f'No fit with multipliers <= {max_multiplier} on up to {max_corrupted} points, degree <= {max_degree}'
    )


def read_points(path: Path) -> list[Point]:
    """Read an ``x,y`` CSV; lines starting with ``#`` are provenance and skipped."""
    with path.open(newline='') as f:
        rows = [row for row in csv.reader(line for line in f if not line.startswith('#')) if row]
    if rows and rows[0] == ['x', 'y']:
        rows = rows[1:]
    return [(int(x), int(y)) for x, y in rows]


def write_points(points: list[Point], path: Path) -> None:
    with path.open('w', newline='') as f:
        writer = csv.writer(f)
        writer.writerow(['x', 'y'])
        writer.writerows(points)
