"""Truncated one-step kernels of the queue and their per-cycle product.

On the levels 0..k the Red kernel U moves up with probability p and stays
with probability q; an arrival at level k leaves the truncated chain. The
Green kernel V moves down with probability q and stays with probability p,
reflecting at 0. W = U^ℓ V^ℓ is one full cycle of ℓ Red and ℓ Green steps.
"""

from fractions import Fraction

from traffic_queues.model import ModelError
from traffic_queues.spectral.models import BandedRationalMatrix


def _check(k: int, p: Fraction) -> None:
    if k < 0:
        raise ModelError(f'Truncation level k must be nonnegative, got {k}')
    if not isinstance(p, Fraction) or not 0 < p < 1:
        raise ModelError(f'Exact rational p in (0, 1) required, got {p!r}')


def red_kernel(k: int, p: Fraction) -> BandedRationalMatrix:
    """U_k: diagonal q, superdiagonal p."""
    _check(k, p)
    q = 1 - p
    entries = {(i, i): q for i in range(k + 1)}
    entries.update({(i, i + 1): p for i in range(k)})
    return BandedRationalMatrix.from_entries(k + 1, 0, 1 if k else 0, entries)


def green_kernel(k: int, p: Fraction) -> BandedRationalMatrix:
    """V_k: V[0][0] = 1, then subdiagonal q and diagonal p."""
    _check(k, p)
    q = 1 - p
    entries = {(0, 0): Fraction(1)}
    for i in range(1, k + 1):
        entries[i, i - 1] = q
        entries[i, i] = p
    return BandedRationalMatrix.from_entries(k + 1, 1 if k else 0, 0, entries)


def random_kernel(k: int, p: Fraction) -> BandedRationalMatrix:
    """(U_k + V_k)/2, one step of randomly switching lights."""
    red, green = red_kernel(k, p), green_kernel(k, p)
    entries = {}
    for i in range(k + 1):
        for j in range(max(0, i - 1), min(k, i + 1) + 1):
            value = (red.entry(i, j) + green.entry(i, j)) / 2
            if value:
                entries[i, j] = value
    bw = 1 if k else 0
    return BandedRationalMatrix.from_entries(k + 1, bw, bw, entries)


def build_cycle_matrix(k: int, ell: int, p: Fraction) -> BandedRationalMatrix:
    """W = U_k^ℓ V_k^ℓ by exact banded multiplication.

    Args:
        k: Truncation level, so W is (k+1)×(k+1).
        ell: Block length, at least 1.
        p: Exact arrival probability in (0, 1).

    Returns:
        BandedRationalMatrix with lower and upper bandwidth ℓ (capped by k).
    """
    if ell < 1:
        raise ModelError(f'Block length must be at least 1, got {ell}')
    red, green = red_kernel(k, p), green_kernel(k, p)
    product = red
    for _ in range(ell - 1):
        product = product.matmul(red)
    for _ in range(ell):
        product = product.matmul(green)
    return product
