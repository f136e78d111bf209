"""Minimal polynomials of high-precision decimals by lattice reduction."""

import logging
import re

import mpmath as mp
from sympy import ZZ
from sympy.polys.matrices import DomainMatrix

from traffic_queues.recognize.models import IntPolynomial, MinPolyResult, RecognitionError


logger = logging.getLogger(__name__)

GUARD_DIGITS = 20
MAX_DEGREE = 8


class NoRelationFoundError(RecognitionError):
    """Raised when no integer polynomial of degree <= max_degree annihilates the value.

    Attributes:
        best: Best candidate seen, if any.
        residual: Its residual |P(y)| at full precision, as text.
    """

    def __init__(self, message: str, best: IntPolynomial | None = None, residual: str | None = None):
        super().__init__(message)
        self.best = best
        self.residual = residual


def significant_digits(text: str) -> int:
    """Significant digits of a decimal string: mantissa only, leading zeros dropped."""
    mantissa = re.split(r'[eE]', text.strip(), maxsplit=1)[0].lstrip('+-')
    return len(mantissa.replace('.', '').lstrip('0'))


def required_precision(max_degree: int) -> int:
    """Rule-of-thumb input precision for relations up to ``max_degree``."""
    return 40 + 20 * max_degree


def _reduced_candidates(y: mp.mpf, degree: int, scale_digits: int) -> list[IntPolynomial]:
    """Rows of the LLL-reduced lattice [e_i | round(10^s·y^i)], read as polynomials."""
    scale = mp.mpf(10) ** scale_digits
    rows = []
    power = mp.mpf(1)
    for i in range(degree + 1):
        row = [0] * (degree + 1)
        row[i] = 1
        row.append(int(mp.nint(scale * power)))
        rows.append(row)
        power *= y
    reduced = DomainMatrix([[ZZ(v) for v in row] for row in rows], (degree + 1, degree + 2), ZZ).lll()
    candidates = []
    for row in reduced.to_Matrix().tolist():
        poly = IntPolynomial(coeffs=tuple(int(v) for v in row[:-1]))
        if poly.degree >= 1:
            candidates.append(poly.primitive())
    return candidates


def _irreducible_factor(poly: IntPolynomial, y: mp.mpf) -> IntPolynomial:
    """The irreducible factor of ``poly`` that vanishes closest at y."""
    _, factors = poly.to_sympy().factor_list()
    if len(factors) == 1 and factors[0][1] == 1:
        return poly
    parts = [IntPolynomial.from_sympy(f).primitive() for f, _ in factors]
    parts = [f for f in parts if f.degree >= 1]
    return min(parts, key=lambda f: abs(f(y)) / max(abs(c) for c in f.coeffs))


def minimal_polynomial(
    y: mp.mpf | str,
    max_degree: int = 4,
    precision: int | None = None,
    guard: int = GUARD_DIGITS,
) -> MinPolyResult:
    """Smallest-degree integer polynomial with a root at y.

    For d = 1..max_degree the lattice spanned by [e_i | round(10^(P-guard)·y^i)]
    is LLL-reduced; a reduced row is accepted when its polynomial vanishes at
    y to 10^-(P-guard) at the full precision P. The result is primitive, has a
    positive leading coefficient and is irreducible over the rationals.

    Args:
        y: Value as an mpf or a decimal string.
        max_degree: Largest degree tried, at most 8.
        precision: Significant digits of y; defaults to the digits of a string
            input or the current mpmath precision.
        guard: Digits held back from the lattice scale for verification.

    Returns:
        MinPolyResult.

    Raises:
        NoRelationFoundError: If no degree up to max_degree passes the residual check.
    """
    if not 1 <= max_degree <= MAX_DEGREE:
        raise ValueError(f'max_degree must lie in 1..{MAX_DEGREE}, got {max_degree}')
    if precision is None:
        precision = significant_digits(y) if isinstance(y, str) else mp.mp.dps
    if precision <= guard:
        raise ValueError(f'precision {precision} must exceed the guard of {guard} digits')
    if precision < required_precision(max_degree):
        logger.warning(
            f'precision {precision} is below the {required_precision(max_degree)} digits '
            f'advised for degree {max_degree}'
        )

    best: IntPolynomial | None = None
    best_residual = None
    with mp.workdps(precision + 10):
        value = mp.mpf(y)
        threshold = mp.mpf(10) ** (-(precision - guard))
        for degree in range(1, max_degree + 1):
            for candidate in _reduced_candidates(value, degree, precision - guard):
                residual = abs(candidate(value))
                logger.debug(f'degree {degree}: {candidate} residual {mp.nstr(residual, 5)}')
                if best_residual is None or residual < best_residual:
                    best, best_residual = candidate, residual
                if residual < threshold:
                    poly = _irreducible_factor(candidate, value)
                    residual = abs(poly(value))
                    return MinPolyResult(polynomial=poly, residual=mp.nstr(residual, 5), precision=precision)

        raise NoRelationFoundError(
            f'No integer relation of degree <= {max_degree} at {precision} digits',
            best=best,
            residual=mp.nstr(best_residual, 5) if best_residual is not None else None,
        )
