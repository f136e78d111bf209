"""χ_ℓ(p) constants: ℓ = 1 is proved, ℓ = 2, 3 are conjectured, ℓ = 0 is random lights."""

import logging
from fractions import Fraction

import mpmath as mp

from traffic_queues.closedform.models import Chi3Components, Chi3IntegerData, RadicalValue
from traffic_queues.model import ModelError


logger = logging.getLogger(__name__)

SUPPORTED_ELLS = (0, 1, 2, 3)

# Ascending coefficients in p
A_POLY = (1, -4, 10, -52, 226, -520, 640, -400, 100)
B_POLY = (1, -2, 6, -8, 4)
C_POLY = (
    1, -4, 16, -104, 506, -1808, 5604, -15576, 35574,
    -61160, 75152, -63440, 34840, -11200, 1600,
)  # fmt: skip
CHI2_POLY = (1, 0, -8, 16, -8)


def _horner(coeffs: tuple[int, ...], x):
    acc = 0 * x
    for c in reversed(coeffs):
        acc = acc * x + c
    return acc


def _reversed_at(coeffs: tuple[int, ...], x: int) -> int:
    """x^deg · poly(1/x) for integer x."""
    deg = len(coeffs) - 1
    return sum(c * x ** (deg - i) for i, c in enumerate(coeffs))


def _check_p(p: Fraction, upper_inclusive: bool = True) -> Fraction:
    if not isinstance(p, Fraction):
        raise ModelError(f'Closed forms need an exact rational p, got {p!r}')
    half = Fraction(1, 2)
    if p <= 0 or p > half or (p == half and not upper_inclusive):
        raise ModelError(f'p must lie in (0, 1/2], got {p}')
    return p


def chi3_components(p: Fraction) -> Chi3Components:
    """Exact a(p), b(p), c(p) and θ^2 = 1 + 4pq + 16p^2q^2.

    Args:
        p: Rational in (0, 1).

    Returns:
        Chi3Components.
    """
    if not isinstance(p, Fraction) or not 0 < p < 1:
        raise ModelError(f'chi3_components needs a rational p in (0, 1), got {p!r}')
    q = 1 - p
    return Chi3Components(
        p=p,
        a=_horner(A_POLY, p),
        b=_horner(B_POLY, p),
        c=_horner(C_POLY, p),
        theta_radicand=1 + 4 * p * q + 16 * p * p * q * q,
    )


def chi_closed(ell: int, p: Fraction) -> RadicalValue:
    """Exact χ_ℓ(p) for ℓ ∈ {0, 1, 2, 3}.

    ℓ = 0, 1 are rational; ℓ = 2 is quadratic over √(1 + 4pq); ℓ = 3 is the
    nested form (q-p)^2/(12pq^9)·[a + (q-p)^2·b·θ + (q-p)·√2·√(c + abθ)].

    Args:
        ell: Block length, or 0 for random lights.
        p: Rational in (0, 1/2]; p = 1/2 gives 0.

    Returns:
        Canonical RadicalValue.
    """
    if ell not in SUPPORTED_ELLS:
        raise ModelError(f'No closed form for ell = {ell}; supported: {SUPPORTED_ELLS}')
    p = _check_p(p)
    q = 1 - p
    d = q - p

    if ell == 0:
        return RadicalValue.rational(p * d * d / (q * q))
    if ell == 1:
        return RadicalValue.rational(p * d * d / q**3)
    if ell == 2:
        k = d * d / (4 * q**6)
        return RadicalValue.from_parts(A=k * _horner(CHI2_POLY, p), B=k * d, D=1 + 4 * p * q)

    comps = chi3_components(p)
    k = d * d / (12 * p * q**9)
    return RadicalValue.from_parts(
        A=k * comps.a,
        B=k * d * d * comps.b,
        D=comps.theta_radicand,
        C=k * d,
        E=2 * comps.c,
        F=2 * comps.a * comps.b,
    )


def chi3_assembled(p: Fraction, digits: int = 100) -> mp.mpf:
    """χ_3(p) evaluated straight from the bracket formula, bypassing RadicalValue."""
    comps = chi3_components(p)
    with mp.workdps(digits + 10):
        pp = mp.mpf(p.numerator) / p.denominator
        q = 1 - pp
        d = q - pp
        a, b, c = (mp.mpf(v.numerator) / v.denominator for v in (comps.a, comps.b, comps.c))
        theta = mp.sqrt(mp.mpf(comps.theta_radicand.numerator) / comps.theta_radicand.denominator)
        bracket = a + d * d * b * theta + d * mp.sqrt(2) * mp.sqrt(c + a * b * theta)
        return d * d / (12 * pp * q**9) * bracket


def chi_float(ell: int, p: Fraction | float, digits: int = 30) -> mp.mpf:
    """χ_ℓ(p) in mpmath for any real p in (0, 1/2]; used on decimal grids."""
    if ell not in SUPPORTED_ELLS:
        raise ModelError(f'No closed form for ell = {ell}; supported: {SUPPORTED_ELLS}')
    if not 0 < p <= Fraction(1, 2):
        raise ModelError(f'p must lie in (0, 1/2], got {p}')
    with mp.workdps(digits + 10):
        if isinstance(p, Fraction):
            pp = mp.mpf(p.numerator) / p.denominator
        else:
            pp = mp.mpf(p)
        q = 1 - pp
        d = q - pp
        if ell == 0:
            return pp * d * d / (q * q)
        if ell == 1:
            return pp * d * d / q**3
        if ell == 2:
            return d * d / (4 * q**6) * (_horner(CHI2_POLY, pp) + d * mp.sqrt(1 + 4 * pp * q))
        a, b, c = _horner(A_POLY, pp), _horner(B_POLY, pp), _horner(C_POLY, pp)
        theta = mp.sqrt(1 + 4 * pp * q + 16 * pp * pp * q * q)
        bracket = a + d * d * b * theta + d * mp.sqrt(2) * mp.sqrt(c + a * b * theta)
        return d * d / (12 * pp * q**9) * bracket


def chi3_integer_data(x: int) -> Chi3IntegerData:
    """Regression-friendly integers of χ_3 at p = 1/x.

    Writing p = 1/x turns every coefficient of the ℓ = 3 formula into an
    integer polynomial in x: a ↦ x^8·a(1/x), b ↦ x^6·(q-p)^2·b(1/x),
    c ↦ 2x^14·c(1/x), θ ↦ √(x^4·θ^2)/x^2, denominator 12(x-1)^9.

    Args:
        x: Integer 1/p >= 3.

    Returns:
        Chi3IntegerData; ``to_radical()`` equals ``chi_closed(3, 1/x)``.
    """
    if x < 3:
        raise ModelError(f'x = 1/p must be at least 3, got {x}')
    a = _reversed_at(A_POLY, x)
    b4 = _reversed_at(B_POLY, x)
    return Chi3IntegerData(
        x=x,
        denominator=12 * (x - 1) ** 9,
        a=a,
        b=(x - 2) ** 2 * b4,
        c=2 * _reversed_at(C_POLY, x),
        f=2 * a * b4,
        radicand=x**4 + 4 * x * x * (x - 1) + 16 * (x - 1) ** 2,
        prefactor=(x - 2) ** 2,
    )
