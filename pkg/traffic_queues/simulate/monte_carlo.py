"""Parallel, reproducible Monte Carlo over many queues."""

import logging
from concurrent.futures import ProcessPoolExecutor
from concurrent.futures.process import BrokenProcessPool
from enum import Enum
from fractions import Fraction

from traffic_queues.config import get_config
from traffic_queues.model import ModelParams, Purpose, Schedule, validate_params
from traffic_queues.simulate.engine import run_queue, run_queue_blocked
from traffic_queues.simulate.models import Histogram, MonteCarloResult, RngStream, SimSummary


logger = logging.getLogger(__name__)


class Engine(str, Enum):
    """Which engine runs each queue."""

    AUTO = 'auto'  # blocked for ℓ-blocks, chunked otherwise
    CHUNKED = 'chunked'
    BLOCKED = 'blocked'


class SimulationError(RuntimeError):
    """Raised when a Monte Carlo job cannot complete; partial results are discarded."""

    def __init__(self, message: str, completed_workers: int):
        super().__init__(message)
        self.completed_workers = completed_workers


def _run_range(
    p: Fraction | float,
    word: str | None,
    n: int,
    seed: int,
    start: int,
    stop: int,
    engine: Engine,
) -> list[int]:
    """Maxima of runs ``start..stop-1``; module-level so worker processes can import it."""
    params = ModelParams(p=p)
    schedule = Schedule(word=word)
    use_blocks = engine is Engine.BLOCKED or (engine is Engine.AUTO and schedule.is_blocks)
    maxima = []
    for run in range(start, stop):
        stream = RngStream(seed=seed, stream_id=run)
        if use_blocks:
            state = run_queue_blocked(params, n, stream, schedule=schedule)
        else:
            state = run_queue(params, schedule, n, stream)
        maxima.append(state.m)
    return maxima


def _partition(runs: int, parts: int) -> list[tuple[int, int]]:
    """Split 0..runs-1 into contiguous ranges."""
    parts = max(1, min(parts, runs))
    size, extra = divmod(runs, parts)
    ranges = []
    start = 0
    for i in range(parts):
        stop = start + size + (1 if i < extra else 0)
        ranges.append((start, stop))
        start = stop
    return ranges


def monte_carlo(
    params: ModelParams,
    schedule: Schedule,
    n: int,
    runs: int,
    seed: int | None = None,
    workers: int | None = None,
    engine: Engine = Engine.AUTO,
) -> MonteCarloResult:
    """Simulate ``runs`` independent queues of length n.

    Run r uses stream (seed, r), and results are merged in run order, so the
    histogram and summary are bit-identical for any worker count.

    Args:
        params: Arrival probability.
        schedule: Light schedule.
        n: Steps per queue.
        runs: Number of queues, >= 1.
        seed: Base seed; defaults to the configured seed.
        workers: Process count; defaults to the configured worker count.
        engine: Engine selection.

    Returns:
        MonteCarloResult with the histogram of M_n and its summary.

    Raises:
        SimulationError: If workers die or memory runs out.
    """
    if runs < 1:
        raise ValueError(f'runs must be at least 1, got {runs}')
    config = get_config()
    seed = config.seed if seed is None else seed
    workers = workers or config.workers
    if workers < 1:
        raise ValueError(f'workers must be at least 1, got {workers}')
    validate_params(params, Purpose.SIMULATION)
    if engine is Engine.BLOCKED and not schedule.is_blocks:
        raise ValueError(f'Blocked engine needs an ell-block schedule, got {schedule.render()}')

    logger.info(
        f'Monte Carlo: p={params.p} schedule={schedule.render()} n={n} runs={runs} seed={seed} workers={workers}'
    )
    ranges = _partition(runs, workers)
    args = [(params.p, schedule.word, n, seed, start, stop, engine) for start, stop in ranges]

    maxima: list[int] = []
    completed = 0
    try:
        if len(ranges) == 1:
            maxima = _run_range(*args[0])
        else:
            with ProcessPoolExecutor(max_workers=len(ranges)) as pool:
                futures = [pool.submit(_run_range, *a) for a in args]
                for future in futures:
                    maxima.extend(future.result())
                    completed += 1
    except (MemoryError, BrokenProcessPool) as e:
        raise SimulationError(
            f'Monte Carlo aborted after {completed}/{len(ranges)} worker ranges: {e}; partial progress discarded',
            completed_workers=completed,
        ) from e

    hist = Histogram.from_maxima(maxima)
    summary = SimSummary.from_histogram(
        hist,
        n=n,
        p=params.p,
        ell=schedule.block_length or params.ell,
        seed=seed,
        schedule=schedule.render(),
    )
    logger.info(f'Monte Carlo done: mean M_n = {summary.mean:.4f} (stderr {summary.stderr:.4f})')
    return MonteCarloResult(histogram=hist, summary=summary)
