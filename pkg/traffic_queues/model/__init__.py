"""Queue model: parameters, light schedules and phases."""

from traffic_queues.model.models import (
    ContractViolationError,
    ModelError,
    ModelParams,
    Phase,
    Purpose,
    Schedule,
)
from traffic_queues.model.params import parse_probability, validate_params
from traffic_queues.model.schedule import ScheduleParseError, parse_schedule, phase_at, render_schedule


__all__ = [
    'ContractViolationError',
    'ModelError',
    'ModelParams',
    'Phase',
    'Purpose',
    'Schedule',
    'ScheduleParseError',
    'parse_probability',
    'parse_schedule',
    'phase_at',
    'render_schedule',
    'validate_params',
]
