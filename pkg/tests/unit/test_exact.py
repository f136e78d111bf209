"""Tests for the exact finite-n law of M_n."""

from fractions import Fraction

import pytest

from traffic_queues.closedform import gumbel_pmf
from traffic_queues.config import get_config
from traffic_queues.model import ModelError, Schedule
from traffic_queues.simulate import Engine, compare_distributions, monte_carlo
from traffic_queues.spectral import Arithmetic, exact_max_cdf, exact_max_pmf


class TestExactMaxCdf:
    """Tests for P{M_n <= k}."""

    def test_two_steps(self, third):
        """Test that one Red and one Green step keep M_2 <= 0 with probability q."""
        assert exact_max_cdf(third, Schedule.blocks(1), 2, 0) == Fraction(2, 3)

    def test_two_red_steps(self, third):
        """Test P{M_3 <= 1} = 1 - p^2 under the pattern RRG."""
        assert exact_max_cdf(third, Schedule.pattern('RRG'), 3, 1) == Fraction(8, 9)

    def test_random_lights_single_step(self, third):
        """Test P{M_1 <= 0} = 1 - p/2 when each step is Red with probability 1/2."""
        assert exact_max_cdf(third, Schedule.random_lights(), 1, 0) == Fraction(5, 6)

    def test_no_steps(self, third):
        assert exact_max_cdf(third, Schedule.blocks(2), 0, 0) == 1

    def test_monotone_in_k(self, third):
        cdfs = [exact_max_cdf(third, Schedule.blocks(2), 40, k) for k in range(8)]
        assert cdfs == sorted(cdfs)
        assert all(0 < c <= 1 for c in cdfs)

    @pytest.mark.parametrize('schedule', [Schedule.blocks(1), Schedule.blocks(3), Schedule.random_lights()])
    def test_float_matches_rational(self, third, schedule):
        """Test that matrix powers agree with exact propagation."""
        exact = exact_max_cdf(third, schedule, 50, 3, Arithmetic.RATIONAL)
        approx = exact_max_cdf(third, schedule, 50, 3, Arithmetic.FLOAT)
        assert isinstance(exact, Fraction)
        assert isinstance(approx, float)
        assert approx == pytest.approx(float(exact), abs=1e-12)

    def test_decimal_p(self):
        value = exact_max_cdf(0.2, Schedule.blocks(1), 30, 2)
        assert isinstance(value, float)
        assert value == pytest.approx(float(exact_max_cdf(Fraction(1, 5), Schedule.blocks(1), 30, 2)), abs=1e-12)

    def test_auto_switches_to_float_beyond_limit(self, third, monkeypatch):
        monkeypatch.setenv('TLQ_EXACT_STEP_LIMIT', '10')
        get_config.cache_clear()
        assert isinstance(exact_max_cdf(third, Schedule.blocks(1), 20, 2), float)
        assert isinstance(exact_max_cdf(third, Schedule.blocks(1), 10, 2), Fraction)

    def test_default_limit_keeps_large_runs_in_float(self, third):
        assert isinstance(exact_max_cdf(third, Schedule.blocks(1), 5000, 2), Fraction)
        assert isinstance(exact_max_cdf(third, Schedule.blocks(1), 5001, 2), float)

    @pytest.mark.parametrize(
        ('p', 'k', 'expected'),
        [(Fraction(0), 0, 1), (Fraction(1), 1, 0), (Fraction(1), 2, 1)],
    )
    def test_degenerate_p_in_both_modes(self, p, k, expected):
        """Test that p = 0 and p = 1 work in float mode as well as rational mode."""
        assert exact_max_cdf(p, Schedule.blocks(1), 4, k, Arithmetic.RATIONAL) == expected
        assert exact_max_cdf(p, Schedule.blocks(1), 4, k, Arithmetic.FLOAT) == pytest.approx(expected)

    def test_rational_mode_limits(self, third, monkeypatch):
        monkeypatch.setenv('TLQ_EXACT_STEP_LIMIT', '10')
        get_config.cache_clear()
        with pytest.raises(ModelError, match='TLQ_EXACT_STEP_LIMIT'):
            exact_max_cdf(third, Schedule.blocks(1), 20, 2, Arithmetic.RATIONAL)
        with pytest.raises(ModelError, match='exact p'):
            exact_max_cdf(0.3, Schedule.blocks(1), 5, 2, Arithmetic.RATIONAL)

    @pytest.mark.parametrize(('p', 'n', 'k'), [(Fraction(1, 3), -1, 0), (Fraction(1, 3), 5, -1), (1.5, 5, 1)])
    def test_invalid(self, p, n, k):
        with pytest.raises(ModelError):
            exact_max_cdf(p, Schedule.blocks(1), n, k)


class TestExactMaxPmf:
    """Tests for the exact prediction table."""

    def test_two_steps(self, third):
        table = exact_max_pmf(third, Schedule.blocks(1), 2)
        assert [(row.m, row.cdf, row.pmf) for row in table.rows] == [
            (0, Fraction(2, 3), Fraction(2, 3)),
            (1, Fraction(1), Fraction(1, 3)),
        ]
        assert table.source == 'exact'
        assert table.ell == 1

    def test_sums_to_one(self, third):
        """Test that the rational pmf sums to exactly one."""
        table = exact_max_pmf(third, Schedule.blocks(2), 200)
        assert table.total() == 1
        assert table.rows[-1].cdf == 1

    def test_levels_bounded_by_red_steps(self, third):
        schedule = Schedule.blocks(3)
        table = exact_max_pmf(third, schedule, 7, tolerance=0.0)
        assert table.rows[-1].m == schedule.red_count(7)

    def test_table_kinds(self, third):
        assert exact_max_pmf(third, Schedule.random_lights(), 10).ell == 0
        assert exact_max_pmf(third, Schedule.pattern('RRGGG'), 10).ell is None

    def test_agrees_with_simulation(self, third, params_third):
        """Test that a Monte Carlo histogram lands close to the exact law."""
        schedule = Schedule.blocks(1)
        result = monte_carlo(params_third, schedule, n=200, runs=4000, seed=7, workers=1)
        comparison = compare_distributions(result.histogram, exact_max_pmf(third, schedule, 200))
        assert comparison.tv < 0.05

    @pytest.mark.slow
    @pytest.mark.parametrize('engine', [Engine.CHUNKED, Engine.BLOCKED])
    @pytest.mark.parametrize('ell', [1, 2, 3])
    def test_engines_match_exact_law(self, third, params_third, ell, engine):
        """Test both engines against the exact law at n = 200 with 10^5 queues."""
        schedule = Schedule.blocks(ell)
        result = monte_carlo(params_third, schedule, n=200, runs=10**5, seed=42, workers=4, engine=engine)
        comparison = compare_distributions(result.histogram, exact_max_pmf(third, schedule, 200))
        assert comparison.p_value > 0.001
        assert comparison.tv <= 0.01

    @pytest.mark.slow
    def test_approaches_gumbel_law(self, third):
        """Test that the exact CDF is uniformly close to the asymptotic law at n = 10^5."""
        exact = exact_max_pmf(third, Schedule.blocks(1), 10**5, Arithmetic.FLOAT).cdf_map()
        asymptotic = gumbel_pmf(1, third, 10**5).cdf_map()
        levels = set(exact) & set(asymptotic)
        assert max(abs(exact[m] - asymptotic[m]) for m in levels) < 0.01
