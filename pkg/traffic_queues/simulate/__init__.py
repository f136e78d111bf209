"""Monte Carlo engines for the reflected walk and its maximum."""

from traffic_queues.simulate.compare import EmptyHistogramError, compare_distributions
from traffic_queues.simulate.engine import (
    increment_frequencies,
    run_queue,
    run_queue_blocked,
    run_queue_stepwise,
    step,
)
from traffic_queues.simulate.models import (
    DistributionComparison,
    Histogram,
    LevelResidual,
    MonteCarloResult,
    QueueState,
    RngStream,
    SimSummary,
)
from traffic_queues.simulate.monte_carlo import Engine, SimulationError, monte_carlo
from traffic_queues.simulate.rng import GENERATOR_NAME, make_generator


__all__ = [
    'GENERATOR_NAME',
    'DistributionComparison',
    'EmptyHistogramError',
    'Engine',
    'Histogram',
    'LevelResidual',
    'MonteCarloResult',
    'QueueState',
    'RngStream',
    'SimSummary',
    'SimulationError',
    'compare_distributions',
    'increment_frequencies',
    'make_generator',
    'monte_carlo',
    'run_queue',
    'run_queue_blocked',
    'run_queue_stepwise',
    'step',
]
