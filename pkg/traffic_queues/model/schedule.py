"""Schedule text grammar and step-to-phase mapping."""

import logging
import re

from traffic_queues.model.models import ContractViolationError, ModelError, Phase, Schedule


logger = logging.getLogger(__name__)

BLOCK_SPEC = re.compile(r'block:(-?\d+)')
PATTERN_PREFIX = 'pattern:'


class ScheduleParseError(ModelError):
    """Raised when a schedule spec does not match the grammar."""

    def __init__(self, message: str, spec: str, position: int):
        super().__init__(f'{message} (at position {position} in {spec!r})')
        self.spec = spec
        self.position = position


def parse_schedule(spec: str) -> Schedule:
    """Parse ``block:<int>``, ``pattern:<word over R,G>`` or ``random``.

    Args:
        spec: Schedule text.

    Returns:
        The corresponding Schedule.

    Raises:
        ScheduleParseError: On malformed text, with the offending position.
    """
    text = spec.strip()
    lead = len(spec) - len(spec.lstrip())

    if text == 'random':
        return Schedule.random_lights()

    match = BLOCK_SPEC.fullmatch(text)
    if match:
        ell = int(match.group(1))
        if ell < 1:
            raise ScheduleParseError(f'Block length must be at least 1, got {ell}', spec, lead + match.start(1))
        return Schedule.blocks(ell)

    if text.startswith(PATTERN_PREFIX):
        word = text[len(PATTERN_PREFIX) :]
        if not word:
            raise ScheduleParseError('Empty pattern', spec, lead + len(PATTERN_PREFIX))
        for offset, char in enumerate(word):
            if char not in 'RG':
                raise ScheduleParseError(f'Invalid character {char!r}', spec, lead + len(PATTERN_PREFIX) + offset)
        schedule = Schedule.pattern(word)
        if schedule.is_degenerate:
            logger.warning(f'Degenerate schedule {spec!r}: pattern lacks a red or a green phase')
        return schedule

    if text.startswith('block:'):
        raise ScheduleParseError('Block length must be an integer', spec, lead + len('block:'))
    raise ScheduleParseError("Expected 'block:<int>', 'pattern:<word>' or 'random'", spec, lead)


def render_schedule(schedule: Schedule) -> str:
    """Canonical spelling; ``parse_schedule(render_schedule(s)) == s``."""
    return schedule.render()


def phase_at(schedule: Schedule, i: int) -> Phase:
    """Phase of step ``i`` (1-based).

    For ℓ-blocks step i is red iff (i - 1) mod 2ℓ < ℓ.

    Raises:
        ContractViolationError: For random lights, or i < 1.
    """
    if schedule.is_random:
        raise ContractViolationError('Random lights have no deterministic phase')
    if i < 1:
        raise ContractViolationError(f'Step indices start at 1, got {i}')
    word = schedule.word
    return Phase(word[(i - 1) % len(word)])
