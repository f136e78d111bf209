"""Integer polynomials and recognition results."""

from fractions import Fraction
from math import gcd
from typing import Any

import mpmath as mp
from pydantic import BaseModel, ConfigDict, Field, field_validator
from sympy import Poly, Symbol


class RecognitionError(ArithmeticError):
    """Base class for failures to recognise an exact structure in numeric data."""


class IntPolynomial(BaseModel):
    """Polynomial with integer coefficients in ascending degree.

    Trailing zero coefficients are stripped, so the last coefficient is the
    leading one (the zero polynomial is ``(0,)``).
    """

    model_config = ConfigDict(frozen=True)

    coeffs: tuple[int, ...]

    @field_validator('coeffs')
    @classmethod
    def _strip(cls, coeffs: tuple[int, ...]) -> tuple[int, ...]:
        coeffs = tuple(int(c) for c in coeffs)
        while len(coeffs) > 1 and coeffs[-1] == 0:
            coeffs = coeffs[:-1]
        return coeffs or (0,)

    @classmethod
    def from_sympy(cls, poly: Poly) -> 'IntPolynomial':
        return cls(coeffs=tuple(int(c) for c in reversed(poly.all_coeffs())))

    def to_sympy(self, var: str = 'y') -> Poly:
        return Poly(list(reversed(self.coeffs)), Symbol(var))

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    @property
    def leading(self) -> int:
        return self.coeffs[-1]

    @property
    def content(self) -> int:
        return gcd(*self.coeffs)

    @property
    def is_zero(self) -> bool:
        return self.coeffs == (0,)

    def primitive(self) -> 'IntPolynomial':
        """Divide by the content and make the leading coefficient positive."""
        if self.is_zero:
            return self
        c = self.content * (1 if self.leading > 0 else -1)
        return IntPolynomial(coeffs=tuple(v // c for v in self.coeffs))

    def __call__(self, x: int | Fraction | mp.mpf) -> int | Fraction | mp.mpf:
        acc = 0 * x
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def render(self, var: str = 'y') -> str:
        """Descending rendering such as ``128y^2 - 49y + 2``."""
        terms = []
        for power in range(self.degree, -1, -1):
            c = self.coeffs[power]
            if c == 0 and self.degree > 0:
                continue
            mag = abs(c)
            if power == 0:
                body = str(mag)
            else:
                body = ('' if mag == 1 else str(mag)) + var + (f'^{power}' if power > 1 else '')
            sign = '-' if c < 0 else '+'
            terms.append(f'-{body}' if not terms and c < 0 else (body if not terms else f'{sign} {body}'))
        return ' '.join(terms)

    def __str__(self) -> str:
        return self.render()


class MinPolyResult(BaseModel):
    """Integer relation found for a decimal value."""

    polynomial: IntPolynomial
    residual: str
    precision: int

    def to_json_dict(self) -> dict[str, Any]:
        return {'coeffs': list(self.polynomial.coeffs), 'residual': self.residual, 'precision': self.precision}


class GrowthDiagnostic(BaseModel):
    """Semi-log view of one regression point.

    ``deviation`` is log10|y| minus the straight-line interpolation of its two
    neighbours, so a point divided by a common factor stands out as a dip.
    """

    x: int
    log10_abs_y: float | None
    deviation: float | None = None


class FitReport(BaseModel):
    """Exact integer-polynomial fit of (x, y) data.

    Attributes:
        polynomial: Fitted polynomial in x.
        points_used: Points the polynomial interpolates.
        holdout_residuals: y - P(x) on every other point; all zero for an accepted fit.
        multipliers: Integer factor applied to each input y, in input order.
        diagnostics: Semi-log growth diagnostics, filled by ``rescale_scan``.
    """

    polynomial: IntPolynomial
    points_used: list[tuple[int, int]]
    holdout_residuals: list[int]
    multipliers: list[int] = Field(default_factory=list)
    diagnostics: list[GrowthDiagnostic] = Field(default_factory=list)

    @property
    def holdout_ok(self) -> bool:
        return all(r == 0 for r in self.holdout_residuals)

    def to_json_dict(self) -> dict[str, Any]:
        return {
            'coeffs': list(self.polynomial.coeffs),
            'multipliers': self.multipliers,
            'holdout_ok': self.holdout_ok,
        }
