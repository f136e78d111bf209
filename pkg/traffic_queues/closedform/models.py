"""Closed-form records: radical values, χ_3 components, prediction tables."""

from fractions import Fraction
from typing import Any

import mpmath as mp
from pydantic import BaseModel, ConfigDict, Field, field_serializer

from traffic_queues.closedform.radicals import canonical_parts, evaluate


class RadicalValue(BaseModel):
    """Exact value (A + B√D + C√(E + F√D))/G.

    Build through ``from_parts`` to get the canonical form: square-free D,
    inner radicand with square-free content, gcd(A, B, C, G) = 1, G > 0.
    Canonical forms of equal values of this shape compare equal.

    Degenerate shapes: C = 0 is a quadratic value, B = C = 0 (and D = 1) a
    rational one.
    """

    model_config = ConfigDict(frozen=True)

    A: int = 0
    B: int = 0
    D: int = 1
    C: int = 0
    E: int = 0
    F: int = 0
    G: int = 1

    @classmethod
    def from_parts(
        cls,
        A: Fraction | int = 0,
        B: Fraction | int = 0,
        D: Fraction | int = 1,
        C: Fraction | int = 0,
        E: Fraction | int = 0,
        F: Fraction | int = 0,
        G: Fraction | int = 1,
    ) -> 'RadicalValue':
        """Canonicalise arbitrary rational parts."""
        parts = canonical_parts(*(Fraction(v) for v in (A, B, D, C, E, F, G)))
        return cls(**dict(zip('ABDCEFG', parts, strict=True)))

    @classmethod
    def rational(cls, value: Fraction | int) -> 'RadicalValue':
        return cls.from_parts(A=value)

    @property
    def is_rational(self) -> bool:
        return self.B == 0 and self.C == 0

    @property
    def is_quadratic(self) -> bool:
        return self.C == 0

    def to_fraction(self) -> Fraction:
        """Exact value of a rational form."""
        if not self.is_rational:
            raise ValueError(f'{self} is not rational')
        return Fraction(self.A, self.G)

    def to_mpf(self, digits: int = 50) -> mp.mpf:
        return evaluate(self.A, self.B, self.D, self.C, self.E, self.F, self.G, digits)

    def decimal(self, digits: int = 50) -> str:
        """Decimal rendering with ``digits`` significant digits."""
        value = self.to_mpf(digits)
        with mp.workdps(digits + 10):
            return mp.nstr(value, digits, strip_zeros=False)

    def __float__(self) -> float:
        return float(self.to_mpf(20))

    def to_json_dict(self, digits: int = 50) -> dict[str, Any]:
        """JSON payload {A, B, D, C, E, F, G, decimal}."""
        return {**self.model_dump(), 'decimal': self.decimal(digits)}

    def __str__(self) -> str:
        terms = []
        if self.A or (not self.B and not self.C):
            terms.append(str(self.A))
        if self.B:
            coef = '' if abs(self.B) == 1 else str(abs(self.B))
            terms.append(f'{"-" if self.B < 0 else "+"} {coef}√{self.D}')
        if self.C:
            coef = '' if abs(self.C) == 1 else str(abs(self.C))
            inner = str(self.E)
            if self.F:
                inner += f' {"-" if self.F < 0 else "+"} {abs(self.F)}√{self.D}'
            terms.append(f'{"-" if self.C < 0 else "+"} {coef}√({inner})')
        text = ' '.join(terms)
        if text.startswith('+ '):
            text = text[2:]
        elif text.startswith('- '):
            text = '-' + text[2:]
        if self.G == 1:
            return text
        if len(terms) == 1:
            return f'{text}/{self.G}'
        return f'({text})/{self.G}'


class Chi3Components(BaseModel):
    """Polynomials a, b, c and the θ radicand of the ℓ = 3 formula, evaluated at p."""

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    p: Fraction
    a: Fraction
    b: Fraction
    c: Fraction
    theta_radicand: Fraction

    @field_serializer('p', 'a', 'b', 'c', 'theta_radicand')
    def _serialize(self, value: Fraction) -> str:
        return str(value)


class Chi3IntegerData(BaseModel):
    """Integer data of χ_3 at p = 1/x, the form used for polynomial regression.

    χ_3(1/x) = prefactor·[a + b√radicand + (x-2)√(c + f√radicand)]/denominator
    with prefactor = (x-2)^2 and denominator = 12(x-1)^9.
    """

    model_config = ConfigDict(frozen=True)

    x: int
    denominator: int
    a: int
    b: int
    c: int
    f: int
    radicand: int
    prefactor: int

    def to_radical(self) -> RadicalValue:
        P = self.prefactor
        return RadicalValue.from_parts(
            A=P * self.a,
            B=P * self.b,
            D=self.radicand,
            C=P * (self.x - 2),
            E=self.c,
            F=self.f,
            G=self.denominator,
        )


class PredictionRow(BaseModel):
    """CDF and pmf of M_n at level m."""

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    m: int
    cdf: Fraction | float
    pmf: Fraction | float

    @field_serializer('cdf', 'pmf')
    def _serialize(self, value: Fraction | float) -> float:
        return float(value)


class PredictionTable(BaseModel):
    """Distribution of M_n over levels m = 0, 1, ....

    Attributes:
        ell: Block length (0 for random lights, None for custom patterns).
        p: Arrival probability as text.
        n: Run length.
        source: 'gumbel' for the asymptotic law, 'exact' for the dynamic-programming oracle.
        rows: One row per level.
        tail_tolerance: Probability mass allowed beyond the last row.
    """

    ell: int | None
    p: str
    n: int
    source: str
    rows: list[PredictionRow] = Field(default_factory=list)
    tail_tolerance: float = 1e-12

    def pmf_map(self) -> dict[int, float]:
        return {row.m: float(row.pmf) for row in self.rows}

    def cdf_map(self) -> dict[int, float]:
        return {row.m: float(row.cdf) for row in self.rows}

    def mean(self) -> float:
        return sum(row.m * float(row.pmf) for row in self.rows)

    def mode(self) -> int:
        return max(self.rows, key=lambda row: float(row.pmf)).m

    def total(self) -> Fraction | float:
        return sum((row.pmf for row in self.rows), start=Fraction(0))


class StrategyRow(BaseModel):
    """Expected maxima of the four light strategies at one p."""

    p: float
    E0: float
    E1: float
    E2: float
    E3: float

    @property
    def values(self) -> dict[int, float]:
        return {0: self.E0, 1: self.E1, 2: self.E2, 3: self.E3}
