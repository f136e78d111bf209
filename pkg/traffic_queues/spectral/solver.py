"""Roots of det(I - zW) near unity and the χ_ℓ(p) estimates built from them."""

import logging
import math
from concurrent.futures import ProcessPoolExecutor
from fractions import Fraction

import mpmath as mp

from traffic_queues.config import get_config
from traffic_queues.model import ModelError
from traffic_queues.spectral.matrices import build_cycle_matrix
from traffic_queues.spectral.models import BandedRationalMatrix, ChiEstimate, PrecisionPolicy


logger = logging.getLogger(__name__)

INITIAL_EPSILON = Fraction(1, 10)
EPSILON_CAP = 10**6
EPSILON_FLOOR = Fraction(1, 10**30)
MIN_DIGITS = 20


class NonConvergenceError(RuntimeError):
    """Raised when no root is bracketed or the χ ratios do not settle.

    Attributes:
        scan_range: (low, high) range of the scaled variable that was scanned, if any.
        estimate: Partial ChiEstimate with every ratio computed so far, if any.
    """

    def __init__(
        self,
        message: str,
        scan_range: tuple[float, float] | None = None,
        estimate: ChiEstimate | None = None,
    ):
        super().__init__(message)
        self.scan_range = scan_range
        self.estimate = estimate


class SingularMatrixError(ArithmeticError):
    """Raised when elimination without pivoting meets a zero pivot."""

    def __init__(self, message: str, z: Fraction | mp.mpf):
        super().__init__(message)
        self.z = z


def _require_subcritical(p: Fraction) -> None:
    if not isinstance(p, Fraction):
        raise ModelError(f'Exact rational p required, got {p!r}')
    if not 0 < p < Fraction(1, 2):
        raise ModelError(f'Root near unity needs 0 < p < 1/2 (p < q), got {p}')


def char_value(W: BandedRationalMatrix, z: Fraction | int | mp.mpf, digits: int | None = None) -> Fraction | mp.mpf:
    """det(I - zW) by banded elimination without pivoting.

    A rational ``z`` is evaluated exactly; otherwise the elimination runs in
    mpmath at ``digits`` significant digits.

    Args:
        W: Banded kernel.
        z: Evaluation point.
        digits: Working precision for the floating path, at least 20.

    Returns:
        Fraction for rational z, mpf otherwise.

    Raises:
        SingularMatrixError: On a zero pivot in exact mode; the floating path
            reads a zero pivot as a vanishing determinant.
    """
    exact = isinstance(z, (Fraction, int))
    if not exact:
        if digits is None or digits < MIN_DIGITS:
            raise ValueError(f'Floating evaluation needs digits >= {MIN_DIGITS}, got {digits}')
        with mp.workdps(digits):
            return +_banded_det(W, mp.mpf(z), exact=False)
    return _banded_det(W, Fraction(z), exact=True)


def _banded_det(W: BandedRationalMatrix, z, exact: bool):
    n, lo, up = W.dim, W.lower, W.upper
    if exact:
        rows = [[-z * v for v in row] for row in W.band]
    else:
        rows = [[-z * (mp.mpf(v.numerator) / v.denominator) if v else mp.mpf(0) for v in row] for row in W.band]
    for i in range(n):
        rows[i][lo] += 1

    det = Fraction(1) if exact else mp.mpf(1)
    for c in range(n):
        pivot = rows[c][lo]
        if pivot == 0:
            if not exact:
                return mp.mpf(0)
            raise SingularMatrixError(f'Zero pivot at column {c} for z = {z}', z)
        det *= pivot
        for r in range(c + 1, min(n, c + lo + 1)):
            factor = rows[r][c - r + lo]
            if factor == 0:
                continue
            factor = factor / pivot
            for j in range(c + 1, min(n, c + up + 1)):
                rows[r][j - r + lo] -= factor * rows[c][j - c + lo]
    return det


def _scale(k: int, p: Fraction) -> Fraction:
    return (p / (1 - p)) ** (2 * k)


def _bracket(sign_positive, start, cap, floor):
    """Geometric scan for an interval with the sign change, starting from ``start``."""
    if sign_positive(start):
        lo = start
        while True:
            hi = 2 * lo
            if hi > cap:
                return None
            if not sign_positive(hi):
                return lo, hi
            lo = hi
    hi = start
    while True:
        lo = hi / 2
        if lo < floor:
            return None
        if sign_positive(lo):
            return lo, hi
        hi = lo


def _scaled_root(W: BandedRationalMatrix, k: int, p: Fraction, policy: PrecisionPolicy) -> mp.mpf:
    """ε with det(I - (1 + ε(p/q)^{2k})W) = 0, at the policy's precision for k."""
    digits = policy.digits(k, p)
    with mp.workdps(digits):
        s = mp.mpf(_scale(k, p).numerator) / _scale(k, p).denominator
        base = _banded_det(W, mp.mpf(1), exact=False)
        if base <= 0:
            raise NonConvergenceError(f'det(I - W) = {mp.nstr(base, 5)} is not positive for k={k}')

        def g(eps):
            return _banded_det(W, 1 + eps * s, exact=False) / base

        def positive(eps: Fraction) -> bool:
            return g(mp.mpf(eps.numerator) / eps.denominator) > 0

        bracket = _bracket(positive, INITIAL_EPSILON, EPSILON_CAP, EPSILON_FLOOR)
        if bracket is None:
            raise NonConvergenceError(
                f'No sign change of det(I - zW) for k={k}, ell-cycle p={p}',
                scan_range=(float(EPSILON_FLOOR), float(EPSILON_CAP)),
            )
        lo, hi = (mp.mpf(b.numerator) / b.denominator for b in bracket)
        eps = mp.findroot(g, (lo, hi), solver='anderson', tol=policy.root_tolerance(), verify=False, maxsteps=500)
        if not lo <= eps <= hi:
            raise NonConvergenceError(f'Root refinement left the bracket for k={k}', scan_range=(float(lo), float(hi)))
        return +eps


def solve_z(k: int, ell: int, p: Fraction, policy: PrecisionPolicy | None = None) -> mp.mpf:
    """Smallest root z_k > 1 of det(I - zW) for W = U_k^ℓ V_k^ℓ.

    The search runs in the scaled variable ε = (z - 1)(q/p)^{2k}: doubling or
    halving from ε = 0.1 until the determinant changes sign (cap 10^6), then
    Anderson-Björck refinement at the policy's precision.

    Args:
        k: Truncation level.
        ell: Block length.
        p: Exact arrival probability in (0, 1/2).
        policy: Precision policy; defaults to the configured guard digits.

    Returns:
        z_k at ``policy.digits(k, p)`` significant digits.

    Raises:
        NonConvergenceError: If no sign change is found within the scan range.
    """
    _require_subcritical(p)
    policy = policy or PrecisionPolicy()
    W = build_cycle_matrix(k, ell, p)
    eps = _scaled_root(W, k, p, policy)
    with mp.workdps(policy.digits(k, p)):
        s = _scale(k, p)
        return 1 + eps * mp.mpf(s.numerator) / s.denominator


def exact_bisect_z(k: int, ell: int, p: Fraction, tol: Fraction = Fraction(1, 10**12)) -> tuple[Fraction, Fraction]:
    """Exact-rational bracket [z_lo, z_hi] of z_k by sign bisection.

    The bracket width in the scaled variable is below ``tol``. Slow, meant
    for small k as ground truth for ``solve_z``.
    """
    _require_subcritical(p)
    W = build_cycle_matrix(k, ell, p)
    s = _scale(k, p)

    def positive(eps: Fraction) -> bool:
        return char_value(W, 1 + eps * s) > 0

    bracket = _bracket(positive, INITIAL_EPSILON, EPSILON_CAP, EPSILON_FLOOR)
    if bracket is None:
        raise NonConvergenceError(
            f'No sign change of det(I - zW) for k={k}', scan_range=(float(EPSILON_FLOOR), float(EPSILON_CAP))
        )
    lo, hi = bracket
    while hi - lo >= tol:
        mid = (lo + hi) / 2
        if positive(mid):
            lo = mid
        else:
            hi = mid
    return 1 + lo * s, 1 + hi * s


def _root_record(ell: int, p: Fraction, k: int, guard_digits: int) -> tuple[int, str, str]:
    """(k, z_k, ratio_k) as decimal strings; module-level so worker processes can import it."""
    policy = PrecisionPolicy(guard_digits=guard_digits)
    W = build_cycle_matrix(k, ell, p)
    eps = _scaled_root(W, k, p, policy)
    digits = policy.digits(k, p)
    with mp.workdps(digits):
        s = _scale(k, p)
        z = 1 + eps * mp.mpf(s.numerator) / s.denominator
        record = (k, mp.nstr(z, digits), mp.nstr(eps, policy.guard_digits))
    logger.debug(f'k={k}: ratio={record[2][:20]} at {digits} digits')
    return record


def sweep_roots(
    ell: int,
    p: Fraction,
    ks: list[int],
    policy: PrecisionPolicy | None = None,
    workers: int | None = None,
) -> list[tuple[int, str, str]]:
    """z_k and ratio_k for several k, merged in k order.

    Args:
        ell: Block length.
        p: Exact arrival probability in (0, 1/2).
        ks: Truncation levels.
        policy: Precision policy.
        workers: Process count; defaults to the configured worker count.

    Returns:
        (k, z_k, ratio_k) rows with decimal strings, sorted by k.
    """
    _require_subcritical(p)
    policy = policy or PrecisionPolicy()
    workers = workers or get_config().workers
    ks = sorted(set(ks))
    args = [(ell, p, k, policy.guard_digits) for k in ks]
    if workers == 1 or len(ks) == 1:
        return [_root_record(*a) for a in args]
    with ProcessPoolExecutor(max_workers=min(workers, len(ks))) as pool:
        return list(pool.map(_root_record, *zip(*args, strict=True)))


def _agreement_digits(a: mp.mpf, b: mp.mpf, cap: int) -> int:
    if a == b:
        return cap
    rel = abs(a - b) / abs(a)
    return max(0, min(cap, math.floor(-mp.log10(rel))))


def chi_spectral(
    ell: int,
    p: Fraction,
    k_max: int = 200,
    step: int = 20,
    tol: float = 1e-10,
    policy: PrecisionPolicy | None = None,
    workers: int | None = None,
) -> ChiEstimate:
    """Estimate χ_ℓ(p) as the limit of (z_k - 1)(q/p)^{2k}.

    Ratios are computed for k = step, 2·step, ..., k_max. The estimate has
    converged when the last two ratios agree to ``tol`` relatively.

    Args:
        ell: Block length, at least 1.
        p: Exact arrival probability in (0, 1/2).
        k_max: Largest truncation level, at least 2·step.
        step: Spacing of truncation levels.
        tol: Relative agreement required between the last two ratios.
        policy: Precision policy.
        workers: Process count for the sweep.

    Returns:
        Converged ChiEstimate.

    Raises:
        NonConvergenceError: If the ratios have not settled; the partial
            estimate is attached.
    """
    _require_subcritical(p)
    if ell < 1:
        raise ModelError(f'Block length must be at least 1, got {ell}')
    if step < 1 or k_max < 2 * step:
        raise ModelError(f'Need step >= 1 and k_max >= 2·step, got step={step}, k_max={k_max}')
    policy = policy or PrecisionPolicy()

    ks = list(range(step, k_max + 1, step))
    logger.info(f'chi_spectral: ell={ell} p={p} k={ks[0]}..{ks[-1]} guard={policy.guard_digits}')
    table = sweep_roots(ell, p, ks, policy=policy, workers=workers)

    with mp.workdps(policy.guard_digits):
        last, previous = mp.mpf(table[-1][2]), mp.mpf(table[-2][2])
        digits = _agreement_digits(last, previous, policy.guard_digits - 20)
        converged = abs(last - previous) <= tol * abs(last)

    estimate = ChiEstimate(
        ell=ell,
        p=str(p),
        table=table,
        value=table[-1][2],
        converged=converged,
        digits=digits,
    )
    if not converged:
        logger.warning(f'chi_spectral: ratios still moving at k={ks[-1]} (about {digits} digits agree)')
        raise NonConvergenceError(
            f'Ratios did not settle to {tol:g} by k={k_max}; last two agree to {digits} digits',
            estimate=estimate,
        )
    logger.info(f'chi_spectral: chi_{ell}({p}) ≈ {estimate.value[:22]} ({digits} digits)')
    return estimate

