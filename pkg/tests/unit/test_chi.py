"""Tests for the χ_ℓ(p) closed forms."""

from fractions import Fraction

import mpmath as mp
import pytest

from traffic_queues.closedform import (
    RadicalValue,
    chi3_assembled,
    chi3_components,
    chi3_integer_data,
    chi_closed,
    chi_float,
)
from traffic_queues.model import ModelError


def nested(k, A, B, D, C, E, F, G, digits=80):
    """k·[A + B√D + C√(E + F√D)]/G at ``digits`` digits."""
    with mp.workdps(digits):
        root = mp.sqrt(D)
        return k * (A + B * root + C * mp.sqrt(E + F * root)) / G


# Published values of χ_3(1/x), two spellings each where available
PUBLISHED = {
    5: [
        (27, 18025, 489, 1281, 5, 25206642, 705138, 1048576),
        (9, 162225, 4401, 1281, 3, 5671494450, 158656050, 3145728),
    ],
    17: [
        (675, 613160569, 1882425, 106113, 5, 30079190568067506, 92338302727986, 274877906944),
        (225, 5518445121, 16941825, 106113, 15, 270712715112607554, 831044724551874, 824633720832),
    ],
    19: [
        (289, 13775887153, 34281469, 161497, 17, 1313388976733016770, 3268219019952026, 2380311484416),
    ],
    10: [
        (64, 16650025, 3818752, 19, 80, 86608486817, 19869473834, 1162261467),
        (64, 66600100, 545536, 14896, 8, 138573578907200, 1135398504800, 4649045868),
    ],
    12: [
        (100, 76862569, 12636400, 37, 20, 29539863834326, 4856330834558, 7073843073),
        (100, 307450276, 1805200, 29008, 10, 1890551285396864, 11100184764704, 28295372292),
    ],
}


class TestLowOrderForms:
    """Tests for ℓ = 0, 1, 2."""

    def test_one_step_blocks(self, third):
        """Test χ_1(p) = p(q - p)^2/q^3."""
        assert chi_closed(1, third).to_fraction() == Fraction(1, 8)

    def test_random_lights(self, third):
        """Test χ_0(p) = p(q - p)^2/q^2."""
        assert chi_closed(0, third).to_fraction() == Fraction(1, 12)

    def test_two_step_blocks(self, third):
        value = chi_closed(2, third)
        assert value == RadicalValue(A=49, B=9, D=17, G=256)
        assert str(value) == '(49 + 9√17)/256'

    @pytest.mark.parametrize('ell', [0, 1, 2, 3])
    def test_vanishes_at_one_half(self, ell):
        """Test that every χ_ℓ carries the factor (q - p)^2."""
        value = chi_closed(ell, Fraction(1, 2))
        assert value.is_rational
        assert value.to_fraction() == 0


class TestThreeStepBlocks:
    """Tests for ℓ = 3."""

    def test_one_third(self, third):
        """Test the canonical form of χ_3(1/3)."""
        value = chi_closed(3, third)
        assert (value.A, value.B, value.D, value.C, value.E, value.F, value.G) == (
            1393, 61, 217, 1, 2416130, 169946, 6144,
        )  # fmt: skip

    @pytest.mark.parametrize('x', sorted(PUBLISHED))
    def test_published_values(self, x):
        """Test agreement with every published spelling to 60 digits."""
        ours = chi_closed(3, Fraction(1, x)).to_mpf(70)
        with mp.workdps(80):
            for spelling in PUBLISHED[x]:
                assert abs(ours - nested(*spelling)) < mp.mpf(10) ** -60 * ours

    @pytest.mark.parametrize('x', [3, 4, 5, 7, 10, 17])
    def test_assembled_matches_canonical(self, x):
        """Test that the bracket formula and the canonical form agree."""
        p = Fraction(1, x)
        with mp.workdps(70):
            assert abs(chi3_assembled(p, 60) - chi_closed(3, p).to_mpf(60)) < mp.mpf(10) ** -55

    def test_non_unit_fraction(self):
        p = Fraction(2, 7)
        with mp.workdps(50):
            assert abs(chi3_assembled(p, 40) - chi_closed(3, p).to_mpf(40)) < mp.mpf(10) ** -35

    def test_components(self, third):
        comps = chi3_components(third)
        assert comps.a == Fraction(1393, 3**8)
        assert comps.c == Fraction(1208065, 3**14)
        assert comps.theta_radicand == Fraction(217, 81)


class TestIntegerData:
    """Tests for the regression integers of χ_3 at p = 1/x."""

    @pytest.mark.parametrize('x', sorted(PUBLISHED))
    def test_matches_published_spelling(self, x):
        """Test that the integer data is the spelling with denominator 12(x - 1)^9."""
        prefactor, a, b, radicand, c_coef, c, f, denominator = PUBLISHED[x][-1]
        data = chi3_integer_data(x)
        assert data.denominator == denominator
        assert data.prefactor == prefactor
        assert (data.a, data.b, data.c, data.f, data.radicand) == (a, b, c, f, radicand)
        assert data.x - 2 == c_coef

    def test_one_third(self):
        data = chi3_integer_data(3)
        assert (data.a, data.b, data.c, data.f, data.radicand, data.denominator) == (
            1393, 61, 2416130, 169946, 217, 6144,
        )  # fmt: skip

    @pytest.mark.parametrize('x', [3, 5, 6, 10, 17, 19])
    def test_radical_equals_closed_form(self, x):
        assert chi3_integer_data(x).to_radical() == chi_closed(3, Fraction(1, x))

    def test_x_at_least_three(self):
        with pytest.raises(ModelError):
            chi3_integer_data(2)


class TestChiFloat:
    """Tests for decimal-p evaluation."""

    @pytest.mark.parametrize('ell', [0, 1, 2, 3])
    def test_matches_closed_form(self, ell):
        assert float(chi_float(ell, 0.2)) == pytest.approx(float(chi_closed(ell, Fraction(1, 5))), rel=1e-12)

    def test_fraction_input(self, third):
        assert float(chi_float(1, third)) == pytest.approx(0.125)


class TestValidation:
    """Tests for argument checks."""

    def test_unsupported_ell(self, third):
        with pytest.raises(ModelError, match='ell = 4'):
            chi_closed(4, third)

    def test_decimal_p(self):
        with pytest.raises(ModelError, match='exact rational'):
            chi_closed(1, 0.25)

    def test_supercritical_p(self):
        with pytest.raises(ModelError):
            chi_closed(1, Fraction(3, 5))

    def test_chi_float_range(self):
        with pytest.raises(ModelError):
            chi_float(2, 0.7)
