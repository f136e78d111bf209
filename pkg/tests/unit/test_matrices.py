"""Tests for banded kernels and the precision policy."""

from fractions import Fraction

import numpy as np
import pytest
from pydantic import ValidationError

from traffic_queues.config import get_config
from traffic_queues.model import ModelError
from traffic_queues.spectral import (
    BandedRationalMatrix,
    PrecisionPolicy,
    build_cycle_matrix,
    green_kernel,
    random_kernel,
    red_kernel,
)


F = Fraction


class TestBandedRationalMatrix:
    """Tests for banded storage and exact products."""

    def test_entries_and_dense(self):
        m = BandedRationalMatrix.from_entries(3, 1, 0, {(0, 0): F(1), (1, 0): F(1, 2), (2, 2): F(3)})
        assert m.entry(1, 0) == F(1, 2)
        assert m.entry(0, 2) == 0
        assert m.to_dense() == [[1, 0, 0], [F(1, 2), 0, 0], [0, 0, 3]]

    def test_entry_outside_band(self):
        with pytest.raises(ValueError, match='outside the band'):
            BandedRationalMatrix.from_entries(3, 0, 0, {(0, 1): F(1)})

    def test_shape_checked(self):
        with pytest.raises(ValidationError):
            BandedRationalMatrix(dim=2, lower=0, upper=0, band=((F(1),),))

    def test_matmul_matches_dense_product(self, third):
        """Test that the banded product equals the dense one and bandwidths add."""
        red, green = red_kernel(5, third), green_kernel(5, third)
        product = red.matmul(green)
        assert (product.lower, product.upper) == (1, 1)
        np.testing.assert_allclose(product.to_numpy(), red.to_numpy() @ green.to_numpy())

    def test_columns(self, third):
        assert list(red_kernel(4, third).columns(4)) == [4]
        assert list(green_kernel(4, third).columns(0)) == [0]


class TestKernels:
    """Tests for the truncated Red, Green and random kernels."""

    def test_red(self, third):
        """Test U_k: stay q, up p, and the top level loses its arrivals."""
        red = red_kernel(3, third)
        assert red.entry(0, 0) == F(2, 3)
        assert red.entry(0, 1) == F(1, 3)
        assert red.row_sums() == [1, 1, 1, F(2, 3)]

    def test_green(self, third):
        """Test V_k: reflecting at 0, down q, stay p."""
        green = green_kernel(3, third)
        assert green.entry(0, 0) == 1
        assert green.entry(2, 1) == F(2, 3)
        assert green.entry(2, 2) == F(1, 3)
        assert green.row_sums() == [1, 1, 1, 1]

    def test_random(self, third):
        assert random_kernel(3, third).row_sums() == [1, 1, 1, F(5, 6)]

    def test_single_level(self, third):
        assert red_kernel(0, third).to_dense() == [[F(2, 3)]]
        assert green_kernel(0, third).to_dense() == [[1]]

    def test_cycle_matrix(self, third):
        """Test W = U_1 V_1 at p = 1/3."""
        W = build_cycle_matrix(1, 1, third)
        assert W.to_dense() == [[F(8, 9), F(1, 9)], [F(4, 9), F(2, 9)]]

    @pytest.mark.parametrize('ell', [1, 2, 3])
    def test_cycle_bandwidth(self, third, ell):
        """Test that U^ℓ V^ℓ has bandwidth ℓ on both sides."""
        assert build_cycle_matrix(10, ell, third).effective_bandwidths() == (ell, ell)

    def test_cycle_is_substochastic(self, third):
        sums = build_cycle_matrix(6, 2, third).row_sums()
        assert all(0 < s <= 1 for s in sums)
        assert sums[-1] < 1

    @pytest.mark.parametrize(
        ('k', 'ell', 'p'),
        [(-1, 1, F(1, 3)), (2, 0, F(1, 3)), (2, 1, 0.3), (2, 1, F(0))],
    )
    def test_invalid(self, k, ell, p):
        with pytest.raises(ModelError):
            build_cycle_matrix(k, ell, p)


class TestPrecisionPolicy:
    """Tests for the working-precision schedule."""

    def test_strictly_increasing(self, third):
        policy = PrecisionPolicy(guard_digits=40)
        digits = [policy.digits(k, third) for k in range(0, 200, 10)]
        assert all(b > a for a, b in zip(digits, digits[1:], strict=False))

    def test_formula(self, third):
        """Test ceil(2k·log10(q/p)) + k + guard."""
        policy = PrecisionPolicy(guard_digits=40)
        assert policy.digits(0, third) == 40
        assert policy.digits(100, third) == 61 + 100 + 40

    def test_default_from_config(self, monkeypatch):
        monkeypatch.setenv('TLQ_GUARD_DIGITS', '75')
        get_config.cache_clear()
        assert PrecisionPolicy().guard_digits == 75

    def test_guard_minimum(self):
        with pytest.raises(ValidationError):
            PrecisionPolicy(guard_digits=10)
