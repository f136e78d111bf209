"""Probability parsing and parameter validation."""

import logging
import re
from fractions import Fraction

from traffic_queues.model.models import ModelError, ModelParams, Purpose


logger = logging.getLogger(__name__)

RATIONAL = re.compile(r'\s*(-?\d+)\s*/\s*(\d+)\s*')
HALF = Fraction(1, 2)


def parse_probability(text: str, require_exact: bool = False) -> Fraction | float:
    """Parse ``a/b`` as an exact Fraction or decimal text as a float.

    Args:
        text: Probability text such as ``1/3`` or ``0.25``.
        require_exact: Reject decimal spellings (spectral and recognition paths).

    Returns:
        Fraction for rationals and integers, float for decimals.

    Raises:
        ModelError: On unparsable text or a decimal when exactness is required.
    """
    match = RATIONAL.fullmatch(text)
    if match:
        denominator = int(match.group(2))
        if denominator == 0:
            raise ModelError(f'Zero denominator in {text!r}')
        return Fraction(int(match.group(1)), denominator)

    stripped = text.strip()
    if stripped.lstrip('-').isdigit():
        return Fraction(int(stripped))

    if require_exact:
        raise ModelError(f'Exact rational p required (e.g. 1/3), got decimal {text!r}')
    try:
        return float(stripped)
    except ValueError as e:
        raise ModelError(f'Cannot parse probability {text!r}') from e


def validate_params(params: ModelParams, purpose: Purpose = Purpose.SIMULATION) -> ModelParams:
    """Check parameters for the intended use.

    Simulation accepts any p in [0, 1] (endpoints are degenerate but simulate
    correctly). Asymptotics needs 0 < p < 1/2, since every χ formula carries
    (q - p)^2 and logarithms of q/p.

    Args:
        params: Parameters to check.
        purpose: SIMULATION or ASYMPTOTICS.

    Returns:
        The same params, unchanged.

    Raises:
        ModelError: If p is outside the admissible range for the purpose.
    """
    p = params.p
    if not 0 <= p <= 1:
        raise ModelError(f'p must be a probability, got {p}')

    if purpose is Purpose.ASYMPTOTICS:
        if not 0 < p < 1:
            raise ModelError(f'Asymptotics need 0 < p < 1, got {p}')
        if p >= HALF:
            raise ModelError(f'Asymptotics need p < q (p < 1/2), got p = {p}')
        return params

    if p in (0, 1):
        logger.warning(f'Degenerate arrival probability p = {p}')
    elif p >= HALF:
        logger.warning(f'Supercritical parameters p = {p} >= q: the queue grows without bound')
    return params
