"""Tests for integer-polynomial regression and common-factor repair."""

import pytest

from traffic_queues.recognize import (
    InsufficientPointsError,
    IntPolynomial,
    NoIntegerFitError,
    NoRescaledFitError,
    fit_int_poly,
    growth_diagnostics,
    read_points,
    rescale_scan,
    write_points,
)


ODD_X = list(range(3, 27, 2))
A_POLY = IntPolynomial(coeffs=(100, -400, 640, -520, 226, -52, 10, -4, 1))


def denominators():
    return [(x, 12 * (x - 1) ** 9) for x in ODD_X]


def a_values():
    return [(x, A_POLY(x)) for x in ODD_X]


def corrupt(points, x, value):
    return [(px, value if px == x else py) for px, py in points]


class TestFitIntPoly:
    """Tests for exact integer regression."""

    def test_denominators(self):
        """Test that 12(x - 1)^9 is recovered from its values."""
        report = fit_int_poly(denominators())
        assert report.polynomial.degree == 9
        assert report.polynomial(7) == 12 * 6**9
        assert report.holdout_ok
        assert report.multipliers == [1] * len(ODD_X)

    def test_a_polynomial(self):
        report = fit_int_poly(a_values())
        assert report.polynomial == A_POLY
        assert len(report.points_used) == 9
        assert report.holdout_residuals == [0, 0, 0]

    def test_published_values(self):
        """Test that a(3) = 1393 and a(5) = 162225."""
        assert A_POLY(3) == 1393
        assert A_POLY(5) == 162225

    def test_insufficient_points(self):
        with pytest.raises(InsufficientPointsError) as exc_info:
            fit_int_poly([(1, 1), (2, 4), (3, 9)])
        assert exc_info.value.degree == 2

    def test_no_fit_within_degree(self):
        with pytest.raises(NoIntegerFitError) as exc_info:
            fit_int_poly([(1, 1), (2, 2), (3, 3)], max_degree=0)
        assert exc_info.value.degree == 0

    def test_duplicate_x(self):
        with pytest.raises(ValueError, match='distinct'):
            fit_int_poly([(1, 1), (1, 2), (3, 3)])

    def test_json_payload(self):
        payload = fit_int_poly(denominators()).to_json_dict()
        assert payload['holdout_ok'] is True
        assert len(payload['coeffs']) == 10


class TestRescaleScan:
    """Tests for repairing values divided by a cancelled factor."""

    def test_clean_data_passes_through(self):
        report = rescale_scan(a_values())
        assert report.polynomial == A_POLY
        assert report.multipliers == [1] * len(ODD_X)
        assert len(report.diagnostics) == len(ODD_X)

    def test_denominator_divided_by_three(self):
        """Test that 12·4^9/3 at x = 5 is repaired with multiplier 3."""
        report = rescale_scan(corrupt(denominators(), 5, 1048576))
        assert report.polynomial.degree == 9
        assert report.multipliers == [1, 3] + [1] * (len(ODD_X) - 2)

    def test_a_divided_by_nine(self):
        """Test that a(5) = 162225 stored as 18025 is repaired with multiplier 9."""
        report = rescale_scan(corrupt(a_values(), 5, 18025))
        assert report.polynomial == A_POLY
        assert report.multipliers[1] == 9
        assert sum(m != 1 for m in report.multipliers) == 1

    def test_uniform_multiplier(self):
        """Test that x(x + 1)/2 is fitted as x^2 + x with a shared multiplier 2."""
        points = [(x, x * (x + 1) // 2) for x in range(1, 7)]
        report = rescale_scan(points)
        assert report.polynomial.coeffs == (0, 1, 1)
        assert report.multipliers == [2] * 6

    def test_nothing_fits(self):
        points = [(1, 1), (2, 7), (3, 2), (4, 100), (5, 3)]
        with pytest.raises(NoRescaledFitError):
            rescale_scan(points, max_multiplier=1, max_degree=1)

    def test_invalid_multiplier_bound(self):
        with pytest.raises(ValueError):
            rescale_scan(a_values(), max_multiplier=0)


class TestGrowthDiagnostics:
    """Tests for the semi-log view of regression data."""

    def test_corrupted_point_is_a_dip(self):
        diagnostics = growth_diagnostics(corrupt(a_values(), 5, 18025))
        interior = [d for d in diagnostics if d.deviation is not None]
        assert min(interior, key=lambda d: d.deviation).x == 5
        assert diagnostics[1].deviation < 0

    def test_end_points_have_no_deviation(self):
        diagnostics = growth_diagnostics(a_values())
        assert diagnostics[0].deviation is None
        assert diagnostics[-1].deviation is None

    def test_zero_value(self):
        diagnostics = growth_diagnostics([(1, 5), (2, 0), (3, 7)])
        assert diagnostics[1].log10_abs_y is None
        assert diagnostics[1].deviation is None


class TestPointFiles:
    """Tests for regression point CSV files."""

    def test_round_trip(self, tmp_path):
        path = tmp_path / 'points.csv'
        write_points(a_values(), path)
        assert read_points(path) == a_values()

    def test_provenance_lines_skipped(self, tmp_path):
        path = tmp_path / 'points.csv'
        path.write_text('# traffic_queues 0.1.0\nx,y\n3,1393\n5,162225\n')
        assert read_points(path) == [(3, 1393), (5, 162225)]
