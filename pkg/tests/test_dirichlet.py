"""Tests for the truncated Dirichlet series and smooth weights"""
import math

import pytest
from scipy.integrate import quad

from src.core.class_numbers import growth_constant, sieve_hurwitz
from src.core.dirichlet import (
    DEFAULT_WEIGHT,
    WEIGHT_FAMILIES,
    dirichlet_tail_bound,
    get_weight,
    mellin_quadrature,
    mellin_W,
    richardson_limit,
    truncated_dirichlet,
)
from src.core.exceptions import (
    DomainError,
    PreconditionError,
    RangeError,
    UnsupportedFamilyError,
)


@pytest.fixture(scope="module")
def table():
    """Table covering N = 10^5 for every shift up to 8"""
    return sieve_hurwitz(200000)


@pytest.fixture(scope="module")
def growth(table):
    return growth_constant(table)


def test_mellin_values():
    """Test the closed-form transform at fixed points"""
    assert mellin_W(DEFAULT_WEIGHT, 2).real == pytest.approx(4.818030, rel=1e-6)
    assert mellin_W(DEFAULT_WEIGHT, 1.5).real == pytest.approx(3.110755, rel=1e-6)
    assert mellin_W(DEFAULT_WEIGHT, 0) == pytest.approx(math.sqrt(math.pi))
    assert mellin_W(DEFAULT_WEIGHT, 2) == pytest.approx(math.sqrt(math.pi) * math.e)


def test_mellin_symmetry():
    """Test W(s) = W(-s)"""
    for s in (0.5, 2, 1 + 2j, -3 + 0.5j):
        assert mellin_W(DEFAULT_WEIGHT, s) == pytest.approx(mellin_W(DEFAULT_WEIGHT, -s), rel=1e-14)


def test_mellin_quadrature_agreement():
    """Test the closed form against numerical integration"""
    for s in (0, 1, 1.5, 2, 2 + 3j):
        exact = mellin_W(DEFAULT_WEIGHT, s)
        assert abs(mellin_quadrature(DEFAULT_WEIGHT, s) - exact) <= 1e-10 * abs(exact)


def test_weight_families():
    """Test the registry and the unsupported-family errors"""
    assert get_weight("exp-log-square") is DEFAULT_WEIGHT
    assert set(WEIGHT_FAMILIES) == {"exp-log-square", "compact-bump"}

    bump = get_weight("compact-bump")
    assert bump.weight(1.0) == pytest.approx(math.exp(-1))
    assert bump.weight(math.e ** 1.5) == 0
    assert mellin_quadrature(bump, 0).real > 0

    with pytest.raises(UnsupportedFamilyError):
        mellin_W(bump, 2)
    with pytest.raises(UnsupportedFamilyError):
        get_weight("gaussian")


def test_vanishing_shift(table):
    """Test that shifts congruent to 2 mod 4 give an identically zero series"""
    for ell in (2, 6):
        result = truncated_dirichlet(ell, 3, 1000, table)
        assert result.value == 0
        assert result.tail_bound == 0
        assert result.terms_used == 1000


def test_truncated_dirichlet_errors(table):
    """Test domain and range errors"""
    with pytest.raises(DomainError):
        truncated_dirichlet(1, 1.5, 100, table)
    with pytest.raises(DomainError):
        truncated_dirichlet(1, 1 + 10j, 100, table)
    with pytest.raises(RangeError):
        truncated_dirichlet(1, 3, table.limit, table)
    with pytest.raises(DomainError):
        dirichlet_tail_bound(1, 1.2, 100, 1.0)


def test_truncated_dirichlet_first_terms(table):
    """Test the partial sum against direct evaluation"""
    s = 2 + 1j
    expected = sum(table.value(n) * table.value(n + 1) * (n + 1) ** -(s + 0.5) for n in range(1, 50))
    assert truncated_dirichlet(1, s, 49, table).value == pytest.approx(complex(expected), rel=1e-13)


@pytest.mark.parametrize("s", [2, 3, 2 + 5j])
def test_tail_bound_monotone(table, growth, s):
    """Test shrinking tails and the certified difference between truncations"""
    for ell in range(1, 9):
        first = truncated_dirichlet(ell, s, 10**4, table, growth)
        second = truncated_dirichlet(ell, s, 10**5, table, growth)
        if ell % 4 == 2:
            assert first.value == second.value == 0
            continue
        assert second.tail_bound < first.tail_bound
        assert abs(second.value - first.value) <= first.tail_bound


def test_tail_bound_closed_form():
    """Test the closed form against the comparison integral"""
    K = 103
    integral = quad(lambda x: x ** -2.5 * (1 + math.log(x)) ** 2, K, math.inf, epsrel=1e-12)[0]
    assert dirichlet_tail_bound(3, 3.0, 100, 1.0) == pytest.approx(integral, rel=1e-8)
    assert dirichlet_tail_bound(3, 3.0, 100, 2.0) == pytest.approx(4 * integral, rel=1e-8)


def test_tail_bound_small_N():
    """Test the explicit terms used below k = 3"""
    bound = dirichlet_tail_bound(1, 3.0, 0, 1.0)
    integral = quad(lambda x: x ** -2.5 * (1 + math.log(x)) ** 2, 3, math.inf, epsrel=1e-12)[0]
    explicit = sum(k ** -2.5 * (1 + math.log(k)) ** 2 for k in (2, 3))
    assert bound == pytest.approx(explicit + integral, rel=1e-8)
    assert dirichlet_tail_bound(1, 3.0, 5, 1.0) < bound


def test_richardson_limit(table, growth):
    """Test the extrapolated limit against the certified truncation"""
    s = 3
    N1, N2 = 50000, 199000
    limit = richardson_limit(1, s, N1, N2, table)
    last = truncated_dirichlet(1, s, N2, table, growth)
    assert abs(limit - last.value) <= last.tail_bound
    assert limit.real > last.value.real

    with pytest.raises(PreconditionError):
        richardson_limit(1, s, N2, N1, table)
