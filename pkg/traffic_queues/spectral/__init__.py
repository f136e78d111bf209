"""Truncated-chain determinant technique for χ_ℓ(p) and the exact law of M_n."""

from traffic_queues.spectral.exact import Arithmetic, exact_max_cdf, exact_max_pmf
from traffic_queues.spectral.matrices import build_cycle_matrix, green_kernel, random_kernel, red_kernel
from traffic_queues.spectral.models import BandedRationalMatrix, ChiEstimate, PrecisionPolicy
from traffic_queues.spectral.solver import (
    NonConvergenceError,
    SingularMatrixError,
    char_value,
    chi_spectral,
    exact_bisect_z,
    solve_z,
    sweep_roots,
)


__all__ = [
    'Arithmetic',
    'BandedRationalMatrix',
    'ChiEstimate',
    'NonConvergenceError',
    'PrecisionPolicy',
    'SingularMatrixError',
    'build_cycle_matrix',
    'char_value',
    'chi_spectral',
    'exact_bisect_z',
    'exact_max_cdf',
    'exact_max_pmf',
    'green_kernel',
    'random_kernel',
    'red_kernel',
    'solve_z',
    'sweep_roots',
]
