"""Canonical nested-radical arithmetic.

Values of the shape (A + B√D + C√(E + F√D))/G are normalised so that equal
values of this shape have equal integer tuples: D is a square-free integer,
the inner radicand has integer coefficients with square-free content, and
A, B, C, G are coprime integers with G > 0.
"""

from fractions import Fraction
from math import gcd, lcm

import mpmath as mp
from sympy import factorint


def squarefree_split(n: int) -> tuple[int, int]:
    """Write n > 0 as s^2 * d with d square-free; returns (s, d)."""
    if n <= 0:
        raise ValueError(f'Expected a positive integer, got {n}')
    s, d = 1, 1
    for prime, exp in factorint(n).items():
        s *= prime ** (exp // 2)
        if exp % 2:
            d *= prime
    return s, d


def rational_sqrt_split(r: Fraction) -> tuple[Fraction, int]:
    """Write √r as u·√d with u rational and d square-free; r >= 0."""
    if r < 0:
        raise ValueError(f'Negative radicand {r}')
    if r == 0:
        return Fraction(0), 1
    # √(a/b) = √(a·b)/b
    s, d = squarefree_split(r.numerator * r.denominator)
    return Fraction(s, r.denominator), d


def _clearing_square(*values: Fraction) -> int:
    """Smallest L with L^2·v integral for every v."""
    den = lcm(*(v.denominator for v in values))
    L = 1
    for prime, exp in factorint(den).items():
        L *= prime ** ((exp + 1) // 2)
    return L


def canonical_parts(
    A: Fraction,
    B: Fraction,
    D: Fraction,
    C: Fraction,
    E: Fraction,
    F: Fraction,
    G: Fraction,
) -> tuple[int, int, int, int, int, int, int]:
    """Normalise (A + B√D + C√(E + F√D))/G to canonical integers (A, B, D, C, E, F, G)."""
    if G == 0:
        raise ZeroDivisionError('Radical form with zero denominator')
    if D < 0:
        raise ValueError(f'Negative outer radicand {D}')

    # Outer radicand: √D = u√d
    u, d = rational_sqrt_split(D)
    B, F = B * u, F * u
    if d == 1:
        A, B = A + B, Fraction(0)
        E, F = E + F, Fraction(0)
    if B == 0 and F == 0:
        d = 1

    # Inner radical
    if C == 0 or (E == 0 and F == 0):
        C, E, F = Fraction(0), Fraction(0), Fraction(0)
    elif F == 0:
        if E < 0:
            raise ValueError(f'Negative inner radicand {E}')
        w, e = rational_sqrt_split(E)
        C = C * w
        if e == 1:
            A, C = A + C, Fraction(0)
        elif d == 1 and B == 0:
            B, d, C = C, e, Fraction(0)
        elif e == d:
            B, C = B + C, Fraction(0)
        E = Fraction(e) if C else Fraction(0)
    else:
        L = _clearing_square(E, F)
        E, F, C = E * L * L, F * L * L, C / L
        content = gcd(int(E), int(F))
        s, _ = squarefree_split(content)
        E, F, C = E / (s * s), F / (s * s), C * s

    if B == 0 and F == 0:
        d = 1
    if C == 0:
        E, F = Fraction(0), Fraction(0)

    a, b, c = A / G, B / G, C / G
    den = lcm(a.denominator, b.denominator, c.denominator)
    return (
        int(a * den),
        int(b * den),
        d,
        int(c * den),
        int(E),
        int(F),
        den,
    )


def evaluate(A: int, B: int, D: int, C: int, E: int, F: int, G: int, digits: int) -> mp.mpf:
    """High-precision value of (A + B√D + C√(E + F√D))/G at ``digits`` significant digits plus guard."""
    with mp.workdps(digits + 10):
        root_d = mp.sqrt(D)
        inner = E + F * root_d
        if inner < 0:
            raise ValueError(f'Negative inner radicand {E} + {F}√{D}')
        value = (A + B * root_d + C * mp.sqrt(inner)) / G
        return +value
