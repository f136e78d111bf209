"""Tests for canonical nested-radical values."""

from fractions import Fraction

import mpmath as mp
import pytest

from traffic_queues.closedform import RadicalValue, squarefree_split
from traffic_queues.closedform.radicals import rational_sqrt_split


class TestSquarefreeSplit:
    """Tests for the square-free decomposition helpers."""

    @pytest.mark.parametrize(
        ('n', 'expected'),
        [(1, (1, 1)), (12, (2, 3)), (1377, (9, 17)), (14896, (28, 19)), (217, (1, 217))],
    )
    def test_integers(self, n, expected):
        assert squarefree_split(n) == expected

    def test_non_positive(self):
        with pytest.raises(ValueError):
            squarefree_split(0)

    def test_rational(self):
        """Test √(17/9) = (1/3)√17."""
        assert rational_sqrt_split(Fraction(17, 9)) == (Fraction(1, 3), 17)
        assert rational_sqrt_split(Fraction(1, 2)) == (Fraction(1, 2), 2)


class TestRadicalValue:
    """Tests for RadicalValue canonicalisation and rendering."""

    def test_rational(self):
        value = RadicalValue.rational(Fraction(6, 48))
        assert value.is_rational
        assert value.to_fraction() == Fraction(1, 8)
        assert str(value) == '1/8'

    def test_perfect_square_radicand_folds(self):
        """Test that √(9/4) is absorbed into the rational part."""
        value = RadicalValue.from_parts(A=1, B=2, D=Fraction(9, 4))
        assert value.is_rational
        assert value.to_fraction() == 4

    def test_quadratic_normalisation(self):
        """Test that radicand squares move into the coefficient."""
        value = RadicalValue.from_parts(A=Fraction(49, 256), B=Fraction(27, 256), D=Fraction(17, 9))
        assert (value.A, value.B, value.D, value.G) == (49, 9, 17, 256)
        assert str(value) == '(49 + 9√17)/256'

    def test_equal_values_equal_forms(self):
        """Test that different spellings of one value canonicalise identically."""
        a = RadicalValue.from_parts(A=2, B=2, D=8)
        b = RadicalValue.from_parts(A=1, B=2, D=2, G=Fraction(1, 2))
        assert a == b

    def test_unnested_inner_radical(self):
        """Test that C√E with E a multiple of D joins the B term."""
        value = RadicalValue.from_parts(A=1, B=1, D=5, C=1, E=20)
        assert (value.A, value.B, value.D, value.C) == (1, 3, 5, 0)

    def test_inner_radicand_content_is_square_free(self):
        """Test that square factors of the inner radicand move out."""
        value = RadicalValue.from_parts(C=1, E=8, F=4, D=3)
        assert (value.C, value.E, value.F, value.D) == (2, 2, 1, 3)

    def test_evaluation(self):
        value = RadicalValue.from_parts(A=1, B=1, D=2, C=1, E=3, F=1)
        with mp.workdps(40):
            expected = 1 + mp.sqrt(2) + mp.sqrt(3 + mp.sqrt(2))
            assert abs(value.to_mpf(40) - expected) < mp.mpf(10) ** -38

    def test_decimal_digits(self):
        value = RadicalValue.rational(Fraction(1, 3))
        assert value.decimal(10) == '0.3333333333'

    def test_negative_outer_radicand(self):
        with pytest.raises(ValueError):
            RadicalValue.from_parts(A=1, B=1, D=-2)

    def test_not_rational(self):
        with pytest.raises(ValueError, match='not rational'):
            RadicalValue.from_parts(B=1, D=2).to_fraction()

    def test_json_payload(self):
        payload = RadicalValue.from_parts(A=1, B=1, D=2).to_json_dict(5)
        assert payload['A'] == 1
        assert payload['D'] == 2
        assert payload['decimal'] == '2.4142'
