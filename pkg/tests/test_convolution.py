"""Tests for shifted convolution sums"""
import math
from fractions import Fraction

import pytest

from src.core.class_numbers import sieve_hurwitz
from src.core.convolution import (
    backward_sum,
    coefficients,
    error_envelope,
    fit_error_exponent,
    main_term,
    perron_height,
    prefix_series,
    secondary_term,
    sharp_sum,
    smooth_prediction,
    smooth_sum,
)
from src.core.dirichlet import DEFAULT_WEIGHT
from src.core.exceptions import (
    DegenerateGridError,
    DomainError,
    RangeError,
    ZeroResidualError,
)
from src.utils.utils import geometric_grid

ZETA3 = 1.2020569031595942


@pytest.fixture(scope="module")
def table():
    """Table large enough for a smooth sum at X = 1000"""
    return sieve_hurwitz(500000)


@pytest.fixture(scope="module")
def small_table():
    """Table for exact hand-checked sums"""
    return sieve_hurwitz(2000)


def test_coefficients_for_shift_one():
    """Test the residues for ell = 1"""
    coeff = coefficients(1)
    assert coeff.c2 == 1
    assert coeff.c1 == 1
    assert coeff.res_32 == pytest.approx(0.0651634, rel=1e-5)
    assert coeff.res_1 == pytest.approx(-0.1061033, rel=1e-6)
    assert coeff.res_32 == pytest.approx(math.pi ** 2 / (126 * 1.2020569031595942), rel=1e-12)


def test_coefficients_divisor_factors():
    """Test exact divisor factors for several shifts"""
    assert coefficients(4).c2 == Fraction(7, 4)
    assert coefficients(4).c1 == Fraction(3, 2)
    assert coefficients(3).c1 == Fraction(4, 3)
    assert coefficients(3).c2 == Fraction(10, 9)

    # Shifts congruent to 2 mod 4 have no main or secondary term
    for ell in (2, 6, 10, 14):
        assert coefficients(ell).c2 == 0
        assert coefficients(ell).c1 == 0
        assert coefficients(ell).res_32 == 0

    with pytest.raises(DomainError):
        coefficients(0)


def test_main_and_secondary_terms():
    """Test the asymptotic terms at fixed points"""
    scale = math.pi ** 2 / (252 * ZETA3)
    assert main_term(1, 1e3) == pytest.approx(scale * 1e6, rel=1e-12)
    assert main_term(1, 1e3) == pytest.approx(32581.73, rel=1e-6)
    assert main_term(4, 1e3) == pytest.approx(1.75 * scale * 1e6, rel=1e-12)
    assert secondary_term(1, 1e4) == pytest.approx(-70735.5, rel=1e-5)
    assert secondary_term(3, 1) == pytest.approx(-0.0943140, rel=1e-5)
    assert main_term(2, 1e6) == 0

    with pytest.raises(DomainError):
        main_term(1, 0)


def test_error_envelope():
    """Test the proven error scale"""
    assert error_envelope(1, 1000) == pytest.approx(1e5 + 1000)
    assert error_envelope(10**6, 8) == pytest.approx(32 + 8 * 10**6)


def test_perron_height():
    """Test both regimes of the truncation height"""
    assert perron_height(1, 1000) == pytest.approx(10)
    assert perron_height(100, 1000) == pytest.approx(10)

    # Large shift: midpoint of [X/ell, X^{2/5} ell^{-1/10}]
    expected = (1 + 1000 ** 0.3) / 2
    assert perron_height(1000, 1000) == pytest.approx(expected)

    with pytest.raises(DomainError):
        perron_height(0, 10)


def test_sharp_sum_small_values(small_table):
    """Test sums checked by hand"""
    assert sharp_sum(1, 3, small_table) == Fraction(1, 6)
    assert sharp_sum(1, 23, small_table) == Fraction(27, 2)
    assert sharp_sum(4, 8, small_table) == Fraction(19, 6)
    assert sharp_sum(1, 0, small_table) == 0
    assert sharp_sum(2, 1000, small_table) == 0


def test_sharp_sum_exact(small_table):
    """Test denominators and single-step increments"""
    for ell in (1, 3, 4, 7):
        previous = Fraction(0)
        for X in range(1, 200):
            total = sharp_sum(ell, X, small_table)
            assert (total * 144).denominator == 1
            assert total - previous == small_table.value(X) * small_table.value(X + ell)
            previous = total


def test_sharp_sum_matches_python_integers(table):
    """Test the chunked int64 dot product against exact integer arithmetic"""
    X, ell = 100000, 5
    values = table.values.tolist()
    expected = sum(values[n] * values[n + ell] for n in range(1, X + 1))
    assert sharp_sum(ell, X, table) == Fraction(expected, 144)


def test_sharp_sum_errors(small_table):
    """Test range and domain errors"""
    with pytest.raises(RangeError):
        sharp_sum(1, small_table.limit, small_table)
    with pytest.raises(DomainError):
        sharp_sum(0, 10, small_table)
    with pytest.raises(DomainError):
        sharp_sum(1, -1, small_table)


def test_backward_sum(small_table):
    """Test the backward form against the forward sum"""
    for ell in (1, 4, 7):
        for X in (ell, ell + 1, 50, 500):
            assert backward_sum(ell, X, small_table) == sharp_sum(ell, X - ell, small_table)

    # The n = ell term contributes H(ell) H(0) = -H(ell)/12
    with_zero = backward_sum(3, 100, small_table, include_zero=True)
    assert with_zero - backward_sum(3, 100, small_table) == Fraction(-4, 144)
    assert backward_sum(5, 3, small_table, include_zero=True) == 0


def test_prefix_series(small_table):
    """Test sums and residuals over a grid"""
    report = prefix_series(1, [3, 23, 100], small_table)
    assert len(report) == 3
    assert report.sharp[:2] == [Fraction(1, 6), Fraction(27, 2)]
    assert report.sharp[2] == sharp_sum(1, 100, small_table)
    assert report.residual[1] == pytest.approx(13.5 - main_term(1, 23))
    assert report.residual2[1] == pytest.approx(13.5 - main_term(1, 23) - secondary_term(1, 23))

    row = report.rows()[1]
    assert list(row) == ["X", "S_num", "S_den", "main", "secondary", "residual", "residual2"]
    assert (row["X"], row["S_num"], row["S_den"]) == (23, 27, 2)


def test_prefix_series_grid_checks(small_table):
    """Test grid validation"""
    assert len(prefix_series(1, [], small_table)) == 0
    with pytest.raises(DomainError):
        prefix_series(1, [10, 10], small_table)
    with pytest.raises(DomainError):
        prefix_series(1, [0, 10], small_table)
    with pytest.raises(RangeError):
        prefix_series(1, [10, small_table.limit], small_table)


def test_smooth_sum_vanishing_and_empty(table):
    """Test shifts without products and scales without terms"""
    assert smooth_sum(2, 1000, table) == 0
    assert smooth_sum(1, 1e-3, table) == 0


def test_smooth_sum_range(small_table):
    """Test that the weight support must fit in the table"""
    with pytest.raises(RangeError):
        smooth_sum(1, 1000, small_table)
    with pytest.raises(DomainError):
        smooth_sum(1, 0, small_table)


def test_smooth_sum_against_prediction(table):
    """Test the smoothed sum against its two residue terms"""
    total = smooth_sum(1, 1000, table)
    predicted = smooth_prediction(1, 1000)
    assert total > 0
    assert total == pytest.approx(predicted, rel=0.1)


def test_fit_error_exponent_errors(small_table):
    """Test the degenerate cases of the fit"""
    with pytest.raises(DegenerateGridError):
        fit_error_exponent(1, [10, 100, 1000], small_table)
    with pytest.raises(DegenerateGridError):
        fit_error_exponent(1, [100, 110, 120, 130, 140], small_table)
    with pytest.raises(ZeroResidualError):
        fit_error_exponent(2, geometric_grid(10, 10 ** 0.25, 9), small_table)


def test_fit_error_exponent(table):
    """Test that the residual grows like X^{3/2}"""
    grid = geometric_grid(1000, 10 ** 0.25, 9)
    slope = fit_error_exponent(1, grid, table)
    assert 1.2 < slope < 1.8


@pytest.mark.slow
def test_fit_error_exponent_acceptance():
    """Test the fitted exponent over two decades ending at 10^6"""
    table = sieve_hurwitz(10**6 + 10)
    grid = geometric_grid(10**4, 10 ** 0.25, 9)
    assert grid[-1] == 10**6
    slope = fit_error_exponent(1, grid, table)
    assert 1.4 <= slope <= 1.6


@pytest.mark.slow
def test_main_term_convergence():
    """Test S_ell(X)/main(X) -> 1 at the rate of the secondary term"""
    table = sieve_hurwitz(1_100_000)
    for ell in (1, 3, 4, 5, 7, 8):
        coeff = coefficients(ell)
        bound_scale = 3.0 * float(coeff.c1 / coeff.c2)
        for X in (10**4, 10**5, 10**6):
            ratio = float(sharp_sum(ell, X, table)) / main_term(ell, X)
            assert abs(ratio - 1) <= bound_scale * X ** -0.5, (ell, X)


@pytest.mark.slow
def test_smooth_cutoff_residual():
    """Test the smoothed residual against X^{1.1} and the X^{3/2} term"""
    table = sieve_hurwitz(math.ceil(10**5 * math.exp(DEFAULT_WEIGHT.support_radius)) + 1)
    w32 = math.sqrt(math.pi) * math.exp(1.5 ** 2 / 4)
    for ell in (1, 3, 4):
        residual = {X: smooth_sum(ell, X, table) - smooth_prediction(ell, X) for X in (10**4, 10**5)}
        assert abs(residual[10**5]) / 1e5 ** 1.1 <= 2 * abs(residual[10**4]) / 1e4 ** 1.1, ell
        assert abs(residual[10**5]) / 1e5 ** 1.5 <= 0.05 * abs(coefficients(ell).res_1) * w32, ell
