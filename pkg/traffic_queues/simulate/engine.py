"""Reflected walk engines.

All engines read one uniform draw per step from the stream, in step order:

* red step: arrival iff draw < p
* green step: departure iff draw < q (clamped at an empty queue)
* random lights: +1 iff draw < p/2, -1 iff draw >= 1 - q/2, else 0

Because the draw consumption is identical, the stepwise reference, the
vectorised chunk engine and the block engine produce the same path for the
same stream, not merely the same distribution.
"""

import logging
from fractions import Fraction

import numpy as np

from traffic_queues.config import get_config
from traffic_queues.model import ContractViolationError, ModelParams, Phase, Schedule
from traffic_queues.simulate.models import QueueState, RngStream
from traffic_queues.simulate.rng import make_generator


logger = logging.getLogger(__name__)


def _thresholds(p: Fraction | float) -> tuple[float, float, float, float]:
    """(p, q, p/2, 1 - q/2) as floats."""
    pf = float(p)
    qf = float(1 - p)
    return pf, qf, pf / 2, 1.0 - qf / 2


def step(state: QueueState, phase: Phase | None, draw: float, p: Fraction | float) -> QueueState:
    """Advance the reflected walk by one step.

    Args:
        state: Current state.
        phase: RED or GREEN, or None for a random-lights step.
        draw: Uniform draw in [0, 1).
        p: Arrival probability.

    Returns:
        The next state.
    """
    pf, qf, half_p, upper = _thresholds(p)
    s = state.s
    if phase is Phase.RED:
        if draw < pf:
            s += 1
    elif phase is Phase.GREEN:
        if draw < qf:
            s = max(s - 1, 0)
    elif draw < half_p:
        s += 1
    elif draw >= upper:
        s = max(s - 1, 0)
    return QueueState(s=s, m=max(state.m, s), j=state.j + 1)


def run_queue_stepwise(params: ModelParams, schedule: Schedule, n: int, stream: RngStream) -> QueueState:
    """Reference engine: one ``step`` call per draw. Slow; meant for small n."""
    gen = make_generator(stream)
    draws = gen.random(n)
    state = QueueState()
    period = None if schedule.is_random else schedule.phases
    for i, draw in enumerate(draws):
        phase = None if period is None else period[i % len(period)]
        state = step(state, phase, float(draw), params.p)
    return state


def _increments(draws: np.ndarray, offset: int, schedule: Schedule, p: Fraction | float) -> np.ndarray:
    """Per-step increments for draws of steps offset+1 .. offset+len(draws)."""
    pf, qf, half_p, upper = _thresholds(p)
    if schedule.is_random:
        return (draws < half_p).astype(np.int64) - (draws >= upper).astype(np.int64)
    red = np.frombuffer(schedule.word.encode(), dtype=np.uint8) == ord('R')
    is_red = red[(np.arange(len(draws), dtype=np.int64) + offset) % len(red)]
    up = (draws < pf).astype(np.int64)
    down = (draws < qf).astype(np.int64)
    return np.where(is_red, up, -down)


def _lindley(increments: np.ndarray, s0: int) -> np.ndarray:
    """Reflected path S_1..S_k started from s0.

    S_j = W_j + max(s0, -min_{i<=j} W_i) with W the free partial sums.
    """
    walk = np.cumsum(increments)
    floor = np.minimum.accumulate(walk)
    return walk + np.maximum(s0, -floor)


def _advance(state: QueueState, increments: np.ndarray) -> QueueState:
    if len(increments) == 0:
        return state
    path = _lindley(increments, state.s)
    return QueueState(s=int(path[-1]), m=max(state.m, int(path.max())), j=state.j + len(increments))


def run_queue(
    params: ModelParams,
    schedule: Schedule,
    n: int,
    stream: RngStream,
    chunk_size: int | None = None,
) -> QueueState:
    """Simulate n steps from S_0 = 0 and return the final state.

    Draws are processed in chunks; within a chunk the reflection is evaluated
    in closed form, so memory stays bounded even for n = 10^10 (an
    overnight-scale job).

    Args:
        params: Arrival probability (ell is taken from the schedule).
        schedule: Blocks, pattern or random lights.
        n: Number of steps, n >= 0.
        stream: Random stream key.
        chunk_size: Draws per chunk; defaults to the configured chunk size.

    Returns:
        QueueState with s = S_n, m = M_n, j = n.
    """
    if n < 0:
        raise ValueError(f'Run length must be nonnegative, got {n}')
    chunk_size = chunk_size or get_config().chunk_size
    gen = make_generator(stream)
    state = QueueState()
    while state.j < n:
        size = min(chunk_size, n - state.j)
        draws = gen.random(size)
        state = _advance(state, _increments(draws, state.j, schedule, params.p))
        if n > chunk_size:
            logger.debug(f'stream {stream.stream_id}: {state.j}/{n} steps, M = {state.m}')
    return state


def run_queue_blocked(
    params: ModelParams,
    n: int,
    stream: RngStream,
    schedule: Schedule | None = None,
    chunk_size: int | None = None,
) -> QueueState:
    """Block-accelerated engine for ℓ-block schedules.

    Per full cycle: A = number of the ℓ red draws below p, s += A, check the
    maximum; D = number of the ℓ green draws below q, s = max(s - D, 0).
    Within a red block s only grows and within a green block it only shrinks,
    and unit decrements commute with clamping, so checking the maximum at
    red-block ends is exact. The trailing partial cycle runs stepwise.

    Args:
        params: p and ℓ.
        n: Number of steps, n >= 0.
        stream: Random stream key.
        schedule: Optional schedule; must be ℓ-blocks when given.
        chunk_size: Draws per chunk; defaults to the configured chunk size.

    Raises:
        ContractViolationError: If ``schedule`` is not an ℓ-block schedule.
    """
    if schedule is None:
        schedule = params.schedule
    ell = schedule.block_length
    if ell is None:
        raise ContractViolationError(f'Block engine needs an ell-block schedule, got {schedule.render()}')
    if n < 0:
        raise ValueError(f'Run length must be nonnegative, got {n}')

    cycle = 2 * ell
    cycles, remainder = divmod(n, cycle)
    chunk_cycles = max(1, (chunk_size or get_config().chunk_size) // cycle)
    pf, qf, _, _ = _thresholds(params.p)

    gen = make_generator(stream)
    s, m, done = 0, 0, 0
    while done < cycles:
        count = min(chunk_cycles, cycles - done)
        draws = gen.random(count * cycle).reshape(count, cycle)
        arrivals = (draws[:, :ell] < pf).sum(axis=1, dtype=np.int64)
        departures = (draws[:, ell:] < qf).sum(axis=1, dtype=np.int64)
        ends = _lindley(arrivals - departures, s)
        starts = np.concatenate(([s], ends[:-1]))
        m = max(m, int((starts + arrivals).max()))
        s = int(ends[-1])
        done += count

    state = QueueState(s=s, m=m, j=cycles * cycle)
    tail = gen.random(remainder)
    return _advance(state, _increments(tail, state.j, schedule, params.p))


def increment_frequencies(params: ModelParams, n: int, stream: RngStream) -> dict[int, float]:
    """Empirical frequencies of the random-lights increments {+1, 0, -1}.

    Converges to {p/2, 1/2, q/2}.
    """
    gen = make_generator(stream)
    inc = _increments(gen.random(n), 0, Schedule.random_lights(), params.p)
    return {value: float(np.count_nonzero(inc == value)) / n for value in (1, 0, -1)}
