"""Simulation state, random streams and result records."""

import math
from dataclasses import dataclass
from fractions import Fraction

from pydantic import BaseModel, ConfigDict, Field, model_validator


@dataclass(frozen=True)
class QueueState:
    """Reflected walk state after ``j`` steps.

    Attributes:
        s: Current queue length S_j.
        m: Running maximum M_j.
        j: Steps consumed.
    """

    s: int = 0
    m: int = 0
    j: int = 0


class RngStream(BaseModel):
    """Key of an independent random stream.

    The draw sequence is a pure function of ``(seed, stream_id)``; see
    ``traffic_queues.simulate.rng`` for the pinned generator.
    """

    model_config = ConfigDict(frozen=True)

    seed: int = Field(ge=0, lt=2**64)
    stream_id: int = Field(ge=0, lt=2**64)


class Histogram(BaseModel):
    """Empirical distribution of M_n, stored sparsely by level."""

    counts: dict[int, int] = Field(default_factory=dict)
    runs: int = 0

    @model_validator(mode='after')
    def _check_totals(self) -> 'Histogram':
        if any(level < 0 for level in self.counts):
            raise ValueError('Histogram levels must be nonnegative')
        if sum(self.counts.values()) != self.runs:
            raise ValueError(f'Histogram counts sum to {sum(self.counts.values())}, expected {self.runs}')
        return self

    @classmethod
    def from_maxima(cls, maxima: list[int]) -> 'Histogram':
        counts: dict[int, int] = {}
        for m in maxima:
            counts[m] = counts.get(m, 0) + 1
        return cls(counts=dict(sorted(counts.items())), runs=len(maxima))

    @property
    def levels(self) -> list[int]:
        return sorted(self.counts)

    def frequency(self, level: int) -> float:
        """Empirical probability of ``level``."""
        return self.counts.get(level, 0) / self.runs if self.runs else 0.0

    def rows(self) -> list[tuple[int, int]]:
        """(level, count) rows in level order."""
        return [(level, self.counts[level]) for level in self.levels]


class SimSummary(BaseModel):
    """Moments of observed maxima plus the run provenance."""

    mean: float
    variance: float = Field(ge=0)
    stderr: float = Field(ge=0)
    min: int
    max: int
    runs: int
    n: int
    p: str
    ell: int
    seed: int
    schedule: str

    @classmethod
    def from_histogram(
        cls,
        hist: Histogram,
        *,
        n: int,
        p: Fraction | float,
        ell: int,
        seed: int,
        schedule: str,
    ) -> 'SimSummary':
        """Summarize a histogram with exact integer sums, so results never depend on merge order."""
        runs = hist.runs
        total = sum(level * count for level, count in hist.counts.items())
        total_sq = sum(level * level * count for level, count in hist.counts.items())
        mean = Fraction(total, runs)
        variance = (Fraction(total_sq) - runs * mean * mean) / (runs - 1) if runs > 1 else Fraction(0)
        return cls(
            mean=float(mean),
            variance=float(variance),
            stderr=math.sqrt(float(variance) / runs),
            min=min(hist.counts),
            max=max(hist.counts),
            runs=runs,
            n=n,
            p=str(p),
            ell=ell,
            seed=seed,
            schedule=schedule,
        )


class MonteCarloResult(BaseModel):
    """Histogram and summary of one Monte Carlo job."""

    histogram: Histogram
    summary: SimSummary


class LevelResidual(BaseModel):
    """Observed vs expected at one level."""

    level: int
    observed: int
    expected: float
    residual: float


class DistributionComparison(BaseModel):
    """Goodness of fit between a histogram and a predicted pmf.

    Attributes:
        tv: Total variation distance.
        chi_square: Pearson statistic over bins with expected count >= 5.
        dof: Degrees of freedom (bins - 1).
        p_value: Upper tail of chi-square(dof) at the statistic.
        per_level: Per-level residuals (observed - expected).
    """

    tv: float
    chi_square: float
    dof: int
    p_value: float
    per_level: list[LevelResidual]
