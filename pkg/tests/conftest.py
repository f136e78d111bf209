"""Shared pytest fixtures for traffic queue tests."""

from fractions import Fraction

import pytest

from traffic_queues.config import get_config
from traffic_queues.model import ModelParams, Schedule


TLQ_ENV = ('TLQ_WORKERS', 'TLQ_SEED', 'TLQ_CHUNK_SIZE', 'TLQ_GUARD_DIGITS', 'TLQ_EXACT_STEP_LIMIT')


@pytest.fixture(autouse=True)
def clean_config(monkeypatch):
    """Every test starts from default configuration."""
    for name in TLQ_ENV:
        monkeypatch.delenv(name, raising=False)
    get_config.cache_clear()
    yield
    get_config.cache_clear()


@pytest.fixture
def third():
    """p = 1/3, the workhorse parameter."""
    return Fraction(1, 3)


@pytest.fixture
def params_third(third):
    return ModelParams(p=third)


@pytest.fixture
def block_schedules():
    """ℓ-block schedules for ℓ = 1..3."""
    return {ell: Schedule.blocks(ell) for ell in (1, 2, 3)}
