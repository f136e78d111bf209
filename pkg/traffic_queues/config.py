"""Configuration management for the traffic queue toolkit."""

import os
from dataclasses import dataclass, field
from functools import lru_cache


@dataclass
class Config:
    """Toolkit configuration loaded from environment variables."""

    # Parallelism
    workers: int = field(default_factory=lambda: int(os.environ.get('TLQ_WORKERS', '1')))

    # Monte Carlo
    seed: int = field(default_factory=lambda: int(os.environ.get('TLQ_SEED', '20181031')))
    chunk_size: int = field(default_factory=lambda: int(os.environ.get('TLQ_CHUNK_SIZE', str(1 << 20))))

    # Spectral precision
    guard_digits: int = field(default_factory=lambda: int(os.environ.get('TLQ_GUARD_DIGITS', '60')))

    # Exact distribution oracle
    exact_step_limit: int = field(
        default_factory=lambda: int(os.environ.get('TLQ_EXACT_STEP_LIMIT', '5000'))
    )

    def validate(self) -> list[str]:
        """Validate configuration and return list of errors."""
        errors = []

        if self.workers < 1:
            errors.append('TLQ_WORKERS must be at least 1')

        if self.guard_digits < 20:
            errors.append('TLQ_GUARD_DIGITS should be at least 20 to resolve the scaled root')

        if self.chunk_size < 1:
            errors.append('TLQ_CHUNK_SIZE must be positive')

        if self.seed < 0:
            errors.append('TLQ_SEED must be a nonnegative integer')

        return errors


@lru_cache
def get_config() -> Config:
    """Get cached configuration instance."""
    return Config()
