"""Nested-radical forms of quartic and quadratic roots over Q(√D)."""

import logging
from fractions import Fraction
from math import isqrt

import mpmath as mp
from sympy import QQ, Poly, Rational, Symbol

from traffic_queues.closedform.models import RadicalValue
from traffic_queues.closedform.radicals import squarefree_split
from traffic_queues.recognize.models import IntPolynomial, RecognitionError


logger = logging.getLogger(__name__)

CHECK_DIGITS = 50


class NoFactorizationError(RecognitionError):
    """Raised when the polynomial does not split into conjugate quadratics over Q(√D)."""


class NonRealBranchError(RecognitionError):
    """Raised when no real root has the requested radical shape."""


def _rational_sqrt(r: Fraction) -> Fraction | None:
    """√r when r is the square of a rational, else None."""
    if r < 0:
        return None
    num, den = isqrt(r.numerator), isqrt(r.denominator)
    if num * num == r.numerator and den * den == r.denominator:
        return Fraction(num, den)
    return None


def _to_fraction(value: Rational) -> Fraction:
    return Fraction(int(value.p), int(value.q))


def _splitting_parameters(c3: Fraction, c2: Fraction, c1: Fraction, c0: Fraction, D: int):
    """Yield (α, β, γ, δ) with y^4 + c3y^3 + c2y^2 + c1y + c0 = (y^2 + uy + v)(y^2 + ūy + v̄).

    u = α + β√D, v = γ + δ√D. Matching coefficients gives α = c3/2,
    γ = (c2 - α^2 + Dβ^2)/2 and Dβδ = αγ - c1/2; with t = β^2 the constant
    term turns into the cubic D·t·γ^2 - (αγ - c1/2)^2 - c0·D·t = 0.
    """
    alpha = c3 / 2

    # β = 0: u is rational and only v carries √D
    gamma0 = (c2 - alpha * alpha) / 2
    if alpha * gamma0 == c1 / 2:
        delta = _rational_sqrt((gamma0 * gamma0 - c0) / D)
        if delta:
            yield alpha, Fraction(0), gamma0, delta

    t = Symbol('t')
    a, c1_, c2_, c0_ = (Rational(v.numerator, v.denominator) for v in (alpha, c1, c2, c0))
    gamma = (c2_ - a * a + D * t) / 2
    cubic = Poly(D * t * gamma**2 - (a * gamma - c1_ / 2) ** 2 - c0_ * D * t, t, domain=QQ)
    for root in sorted(cubic.ground_roots()):
        tr = _to_fraction(root)
        if tr <= 0:
            continue
        beta = _rational_sqrt(tr)
        if beta is None:
            continue
        g = (c2 - alpha * alpha + D * tr) / 2
        delta = (alpha * g - c1 / 2) / (D * beta)
        yield alpha, beta, g, delta


def _candidates_quartic(poly: IntPolynomial, D: int) -> list[RadicalValue]:
    candidates = []
    for alpha, beta, gamma, delta in _splitting_parameters(*_monic(poly), D):
        # u^2 - 4v = (α^2 + Dβ^2 - 4γ) + (2αβ - 4δ)√D
        e = alpha * alpha + D * beta * beta - 4 * gamma
        f = 2 * alpha * beta - 4 * delta
        for s in (1, -1):
            for branch in (1, -1):
                with mp.workdps(CHECK_DIGITS):
                    inner = mp.mpf(e.numerator) / e.denominator
                    inner += s * mp.mpf(f.numerator) / f.denominator * mp.sqrt(D)
                if inner < 0:
                    continue
                candidates.append(
                    RadicalValue.from_parts(A=-alpha / 2, B=-s * beta / 2, D=D, C=Fraction(branch, 2), E=e, F=s * f)
                )
        if candidates:
            return candidates
    return candidates


def _candidates_quadratic(poly: IntPolynomial, D: int) -> list[RadicalValue]:
    c, b, a = poly.coeffs
    disc = b * b - 4 * a * c
    if disc < 0:
        raise NonRealBranchError(f'{poly} has no real roots')
    if disc == 0:
        return [RadicalValue.from_parts(A=Fraction(-b, 2 * a))]
    s, d = squarefree_split(disc)
    if d not in (1, D):
        raise NoFactorizationError(f'Discriminant of {poly} has square-free part {d}, not {D}')
    return [RadicalValue.from_parts(A=Fraction(-b, 2 * a), B=Fraction(sign * s, 2 * a), D=d) for sign in (1, -1)]


def quartic_to_nested_radical(
    poly: IntPolynomial,
    D: int,
    target: mp.mpf | float | None = None,
) -> RadicalValue:
    """Express a root of ``poly`` as (A + B√D + C√(E + F√D))/G.

    A quartic is split into conjugate monic quadratics y^2 + uy + v over
    Q(√D); the root is then (-u ± √(u^2 - 4v))/2. Degree 2 takes the
    quadratic formula directly and checks that √D is the right field.

    Args:
        poly: Integer polynomial of degree 2 or 4.
        D: Square-free positive outer radicand.
        target: Pick the real root closest to this value; default is the largest real root.

    Returns:
        Canonical RadicalValue.

    Raises:
        NoFactorizationError: If poly does not split over Q(√D).
        NonRealBranchError: If no candidate root is real.
    """
    if D < 1 or squarefree_split(D)[0] != 1:
        raise ValueError(f'Outer radicand must be a square-free positive integer, got {D}')
    if poly.degree == 2:
        candidates = _candidates_quadratic(poly, D)
    elif poly.degree == 4:
        candidates = _candidates_quartic(poly, D)
        if not candidates:
            if not any(True for _ in _splitting_parameters(*_monic(poly), D)):
                raise NoFactorizationError(f'{poly} does not split into conjugate quadratics over Q(√{D})')
            raise NonRealBranchError(f'No real root of {poly} has a nested form over Q(√{D})')
    else:
        raise NoFactorizationError(f'Only degrees 2 and 4 have nested forms here, got degree {poly.degree}')

    with mp.workdps(CHECK_DIGITS):
        values = [(c, c.to_mpf(CHECK_DIGITS)) for c in candidates]
        if target is None:
            chosen = max(values, key=lambda cv: cv[1])[0]
        else:
            goal = mp.mpf(target)
            chosen = min(values, key=lambda cv: abs(cv[1] - goal))[0]
    logger.debug(f'{poly} over Q(√{D}): {len(candidates)} real candidates, chose {chosen}')
    return chosen


def _monic(poly: IntPolynomial) -> tuple[Fraction, Fraction, Fraction, Fraction]:
    lead = Fraction(poly.leading)
    c0, c1, c2, c3 = (Fraction(c) / lead for c in poly.coeffs[:4])
    return c3, c2, c1, c0


def eval_radical_form(form: RadicalValue, digits: int = 50) -> mp.mpf:
    """Decimal value of a radical form at ``digits`` significant digits.

    Raises:
        NonRealBranchError: If the inner radicand is negative.
    """
    try:
        return form.to_mpf(digits)
    except ValueError as e:
        raise NonRealBranchError(str(e)) from e
