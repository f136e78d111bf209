"""Tests for the schedule grammar and step phases."""

import logging

import pytest

from traffic_queues.model import (
    ContractViolationError,
    Phase,
    Schedule,
    ScheduleParseError,
    parse_schedule,
    phase_at,
    render_schedule,
)


class TestParseSchedule:
    """Tests for parse_schedule."""

    def test_block(self):
        assert parse_schedule('block:3') == Schedule.blocks(3)

    def test_random(self):
        assert parse_schedule(' random ').is_random

    def test_pattern_equal_to_blocks(self):
        """Test that a pattern spelling of ℓ-blocks renders as a block spec."""
        schedule = parse_schedule('pattern:RRGGRRGG')
        assert schedule == Schedule.blocks(2)
        assert render_schedule(schedule) == 'block:2'

    @pytest.mark.parametrize('spec', ['block:1', 'block:4', 'pattern:RRG', 'pattern:RGGRG', 'random'])
    def test_render_parses_back(self, spec):
        """Test that the canonical rendering parses to the same schedule."""
        schedule = parse_schedule(spec)
        assert parse_schedule(render_schedule(schedule)) == schedule

    def test_invalid_character_position(self):
        """Test that the offending character position is reported."""
        with pytest.raises(ScheduleParseError) as exc_info:
            parse_schedule('pattern:RGX')
        assert exc_info.value.position == 10
        assert exc_info.value.spec == 'pattern:RGX'

    @pytest.mark.parametrize(('spec', 'position'), [('  pattern:RGB', 12), (' block:0', 7), ('\tcycle:3', 1)])
    def test_position_counts_leading_whitespace(self, spec, position):
        with pytest.raises(ScheduleParseError) as exc_info:
            parse_schedule(spec)
        assert exc_info.value.position == position
        assert exc_info.value.spec == spec

    def test_zero_block_length(self):
        with pytest.raises(ScheduleParseError) as exc_info:
            parse_schedule('block:0')
        assert exc_info.value.position == 6

    def test_non_integer_block_length(self):
        with pytest.raises(ScheduleParseError, match='integer'):
            parse_schedule('block:two')

    def test_empty_pattern(self):
        with pytest.raises(ScheduleParseError, match='Empty'):
            parse_schedule('pattern:')

    def test_unknown_form(self):
        with pytest.raises(ScheduleParseError) as exc_info:
            parse_schedule('cycle:3')
        assert exc_info.value.position == 0

    def test_degenerate_pattern_warns(self, caplog):
        """Test that an all-red pattern is accepted with a warning."""
        with caplog.at_level(logging.WARNING):
            schedule = parse_schedule('pattern:RRR')
        assert schedule.is_degenerate
        assert 'Degenerate' in caplog.text


class TestPhaseAt:
    """Tests for phase_at."""

    def test_blocks(self):
        """Test that step i is red iff (i - 1) mod 2ℓ < ℓ."""
        schedule = Schedule.blocks(2)
        phases = [phase_at(schedule, i) for i in range(1, 9)]
        assert phases == [Phase.RED, Phase.RED, Phase.GREEN, Phase.GREEN] * 2

    def test_pattern(self):
        schedule = parse_schedule('pattern:RRG')
        assert [phase_at(schedule, i) for i in range(1, 5)] == [Phase.RED, Phase.RED, Phase.GREEN, Phase.RED]

    def test_random_lights_have_no_phase(self):
        with pytest.raises(ContractViolationError):
            phase_at(Schedule.random_lights(), 1)

    def test_steps_start_at_one(self):
        with pytest.raises(ContractViolationError):
            phase_at(Schedule.blocks(1), 0)
