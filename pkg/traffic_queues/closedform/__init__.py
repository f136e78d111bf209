"""Closed forms for χ_ℓ(p), the Gumbel-type law of M_n and expected maxima."""

from traffic_queues.closedform.chi import (
    SUPPORTED_ELLS,
    chi3_assembled,
    chi3_components,
    chi3_integer_data,
    chi_closed,
    chi_float,
)
from traffic_queues.closedform.gumbel import (
    UnsupportedRegimeError,
    expected_max,
    expected_max_decimal,
    gumbel_cdf,
    gumbel_parameters,
    gumbel_pmf,
    linear_grid,
    strategy_table,
    variance_max,
)
from traffic_queues.closedform.models import (
    Chi3Components,
    Chi3IntegerData,
    PredictionRow,
    PredictionTable,
    RadicalValue,
    StrategyRow,
)
from traffic_queues.closedform.radicals import squarefree_split


__all__ = [
    'SUPPORTED_ELLS',
    'Chi3Components',
    'Chi3IntegerData',
    'PredictionRow',
    'PredictionTable',
    'RadicalValue',
    'StrategyRow',
    'UnsupportedRegimeError',
    'chi3_assembled',
    'chi3_components',
    'chi3_integer_data',
    'chi_closed',
    'chi_float',
    'expected_max',
    'expected_max_decimal',
    'gumbel_cdf',
    'gumbel_parameters',
    'gumbel_pmf',
    'linear_grid',
    'squarefree_split',
    'strategy_table',
    'variance_max',
]
