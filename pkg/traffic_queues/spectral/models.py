"""Banded kernels, precision policy and χ estimates for the truncated-chain technique."""

import math
from fractions import Fraction
from typing import Any

import mpmath as mp
import numpy as np
from pydantic import BaseModel, ConfigDict, Field, field_serializer, model_validator

from traffic_queues.config import get_config


class BandedRationalMatrix(BaseModel):
    """Square matrix of exact rationals with a fixed band.

    Row ``i`` stores the columns ``i - lower .. i + upper`` in ``band[i]``;
    positions outside the matrix are stored as zero.
    """

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    dim: int = Field(ge=1)
    lower: int = Field(ge=0)
    upper: int = Field(ge=0)
    band: tuple[tuple[Fraction, ...], ...]

    @model_validator(mode='after')
    def _check_shape(self) -> 'BandedRationalMatrix':
        width = self.lower + self.upper + 1
        if len(self.band) != self.dim or any(len(row) != width for row in self.band):
            raise ValueError(f'Band storage must be {self.dim} rows of width {width}')
        return self

    @classmethod
    def from_entries(
        cls,
        dim: int,
        lower: int,
        upper: int,
        entries: dict[tuple[int, int], Fraction],
    ) -> 'BandedRationalMatrix':
        band = [[Fraction(0)] * (lower + upper + 1) for _ in range(dim)]
        for (i, j), value in entries.items():
            offset = j - i + lower
            if not 0 <= offset <= lower + upper:
                raise ValueError(f'Entry ({i}, {j}) lies outside the band ({lower}, {upper})')
            band[i][offset] = Fraction(value)
        return cls(dim=dim, lower=lower, upper=upper, band=tuple(tuple(row) for row in band))

    def entry(self, i: int, j: int) -> Fraction:
        offset = j - i + self.lower
        if 0 <= offset <= self.lower + self.upper and 0 <= j < self.dim:
            return self.band[i][offset]
        return Fraction(0)

    def columns(self, i: int) -> range:
        """Column indices of row ``i`` inside the band and the matrix."""
        return range(max(0, i - self.lower), min(self.dim, i + self.upper + 1))

    def matmul(self, other: 'BandedRationalMatrix') -> 'BandedRationalMatrix':
        """Exact banded product; bandwidths add."""
        if self.dim != other.dim:
            raise ValueError(f'Dimension mismatch {self.dim} vs {other.dim}')
        lower, upper = self.lower + other.lower, self.upper + other.upper
        entries: dict[tuple[int, int], Fraction] = {}
        for i in range(self.dim):
            for t in self.columns(i):
                left = self.entry(i, t)
                if not left:
                    continue
                for j in other.columns(t):
                    right = other.entry(t, j)
                    if right:
                        entries[i, j] = entries.get((i, j), Fraction(0)) + left * right
        return BandedRationalMatrix.from_entries(self.dim, min(lower, self.dim - 1), min(upper, self.dim - 1), entries)

    def effective_bandwidths(self) -> tuple[int, int]:
        """(lower, upper) bandwidths of the nonzero pattern."""
        lower = upper = 0
        for i in range(self.dim):
            for j in self.columns(i):
                if self.entry(i, j):
                    lower = max(lower, i - j)
                    upper = max(upper, j - i)
        return lower, upper

    def row_sums(self) -> list[Fraction]:
        return [sum(row, Fraction(0)) for row in self.band]

    def to_dense(self) -> list[list[Fraction]]:
        return [[self.entry(i, j) for j in range(self.dim)] for i in range(self.dim)]

    def to_numpy(self) -> np.ndarray:
        return np.array([[float(v) for v in row] for row in self.to_dense()], dtype=np.float64)


class PrecisionPolicy(BaseModel):
    """Working precision for the root near unity of the size-(k+1) problem.

    z_k - 1 is of order (p/q)^{2k}, so resolving ``guard_digits`` digits of
    the scaled root needs about 2k·log10(q/p) digits on top of the guard.
    One extra digit per k absorbs the cancellation in det(I - zW) and makes
    the schedule strictly increasing in k.
    """

    model_config = ConfigDict(frozen=True)

    guard_digits: int = Field(default_factory=lambda: get_config().guard_digits, ge=20)

    def digits(self, k: int, p: Fraction | float) -> int:
        ratio = (1 - float(p)) / float(p)
        return math.ceil(2 * k * math.log10(ratio)) + k + self.guard_digits

    def root_tolerance(self) -> mp.mpf:
        """Relative tolerance for the scaled root."""
        return mp.mpf(10) ** (-(self.guard_digits - 20))


class ChiEstimate(BaseModel):
    """Ratios (z_k - 1)(q/p)^{2k} over a sweep of truncation levels.

    Attributes:
        ell: Block length.
        p: Arrival probability as text.
        table: (k, z_k, ratio_k) rows with decimal strings at working precision.
        value: Last ratio, the χ_ℓ(p) estimate.
        converged: Whether the last two ratios agree to the requested tolerance.
        digits: Estimated correct significant digits of ``value``.
    """

    ell: int
    p: str
    table: list[tuple[int, str, str]] = Field(default_factory=list)
    value: str = ''
    converged: bool = False
    digits: int = 0

    @field_serializer('table')
    def _serialize_table(self, table: list[tuple[int, str, str]]) -> list[list[Any]]:
        return [list(row) for row in table]

    @property
    def ratios(self) -> list[float]:
        return [float(row[2]) for row in self.table]

    def __float__(self) -> float:
        return float(self.value)
