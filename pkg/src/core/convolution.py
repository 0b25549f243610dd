"""Shifted convolution sums of Hurwitz class numbers"""
import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Dict, List, Sequence

import mpmath
import numpy as np

from ..config import get_config_dict
from ..utils.logger import logger
from .arithmetic import odd_part, sigma_nu
from .class_numbers import ClassNumberTable
from .dirichlet import DEFAULT_WEIGHT, SmoothWeightSpec, mellin_W
from .exceptions import (
    DegenerateGridError,
    DomainError,
    RangeError,
    ZeroResidualError,
    require,
)

config = get_config_dict()
SUM_CHUNK = config["SUM_CHUNK"]
FIT_MIN_POINTS = config["FIT_MIN_POINTS"]
FIT_MIN_DECADES = config["FIT_MIN_DECADES"]
CSV_COLUMNS = config["CSV_COLUMNS"]
INT64_MAX = np.iinfo(np.int64).max


@dataclass(frozen=True)
class AsymptoticCoefficients:
    """Divisor factors of the shift and the residues of D_l(s) at s = 3/2 and s = 1."""
    ell: int
    c2: Fraction
    c1: Fraction
    res_32: float
    res_1: float

    @property
    def main_coefficient(self) -> float:
        return self.res_32 / 2

    @property
    def secondary_coefficient(self) -> float:
        return 2 * self.res_1 / 3


def _divisor_factor(ell: int, nu: int) -> Fraction:
    return (2 * sigma_nu(Fraction(ell, 4), nu) - sigma_nu(Fraction(ell, 2), nu)
            + sigma_nu(odd_part(ell), nu))


@lru_cache(maxsize=256)
def coefficients(ell: int) -> AsymptoticCoefficients:
    """
    Exact divisor factors c2, c1 and the residues they determine.

    c_k = 2 sigma_{-k}(ell/4) - sigma_{-k}(ell/2) + sigma_{-k}(ell_o),
    res_32 = pi^2 c2 / (126 zeta(3)) and res_1 = -c1 / (3 pi).

    Args:
        ell: Positive shift

    Returns:
        AsymptoticCoefficients: exact factors and float residues
    """
    require(ell >= 1, DomainError, f"shift must be positive, got {ell}")
    c2 = _divisor_factor(ell, -2)
    c1 = _divisor_factor(ell, -1)
    with mpmath.workdps(30):
        res_32 = mpmath.pi ** 2 * mpmath.mpf(c2.numerator) / c2.denominator / (126 * mpmath.zeta(3))
        res_1 = -mpmath.mpf(c1.numerator) / c1.denominator / (3 * mpmath.pi)
        return AsymptoticCoefficients(ell, c2, c1, float(res_32), float(res_1))


def main_term(ell: int, X: float) -> float:
    """pi^2 c2(ell) X^2 / (252 zeta(3)), half the s = 3/2 residue times X^2."""
    require(X > 0, DomainError, f"X must be positive, got {X}")
    return coefficients(ell).main_coefficient * X ** 2


def secondary_term(ell: int, X: float) -> float:
    """-(2 / (9 pi)) c1(ell) X^{3/2}."""
    require(X > 0, DomainError, f"X must be positive, got {X}")
    return coefficients(ell).secondary_coefficient * X ** 1.5


def error_envelope(ell: int, X: float) -> float:
    """Proven error scale X^{5/3} + X ell of the sharp sum."""
    return X ** (5 / 3) + X * ell


def perron_height(ell: int, X: float) -> float:
    """
    Truncation height of the Perron integral behind the sharp asymptotic.

    X^{1/3} while ell <= X^{2/3}; otherwise the midpoint of [X/ell, X^{2/5} ell^{-1/10}]
    when that interval is non-empty, else X/ell.
    """
    require(ell >= 1 and X > 0, DomainError, f"need ell >= 1 and X > 0, got ell={ell}, X={X}")
    if ell <= X ** (2 / 3):
        return X ** (1 / 3)
    lo = X / ell
    hi = X ** 0.4 * ell ** -0.1
    return (lo + hi) / 2 if lo <= hi else lo


def _exact_dot(a: np.ndarray, b: np.ndarray) -> int:
    """Exact dot product of nonnegative int64 vectors, split so no partial sum overflows."""
    if len(a) == 0:
        return 0
    peak = int(a.max()) * int(b.max())
    if peak == 0:
        return 0
    step = max(1, INT64_MAX // peak)
    return sum(int(np.dot(a[i:i + step], b[i:i + step])) for i in range(0, len(a), step))


def _twelfths_product_sum(ell: int, start: int, stop: int, table: ClassNumberTable) -> int:
    """sum over start <= n < stop of 144 H(n) H(n+ell), for start >= 1."""
    total = 0
    for lo in range(start, stop, SUM_CHUNK):
        hi = min(lo + SUM_CHUNK, stop)
        total += _exact_dot(table.twelve_times(lo, hi), table.twelve_times(lo + ell, hi + ell))
    return total


def _check_shift(ell: int, X: int, table: ClassNumberTable) -> None:
    require(ell >= 1, DomainError, f"shift must be positive, got {ell}")
    require(X >= 0, DomainError, f"X must be nonnegative, got {X}")
    require(X + ell <= table.limit, RangeError,
            f"X + ell = {X + ell} exceeds table limit {table.limit}")


def sharp_sum(ell: int, X: int, table: ClassNumberTable) -> Fraction:
    """
    Exact S_l(X) = sum_{n=1}^{X} H(n) H(n+ell).

    Args:
        ell: Positive shift
        X: Upper summation limit
        table: Class number table with limit >= X + ell

    Returns:
        Fraction: exact sum, denominator dividing 144
    """
    _check_shift(ell, X, table)
    return Fraction(_twelfths_product_sum(ell, 1, X + 1, table), 144)


def backward_sum(ell: int, X: int, table: ClassNumberTable, include_zero: bool = False) -> Fraction:
    """
    Exact sum_{n <= X} H(n) H(n-ell) over n - ell >= 1, the form the Perron argument uses.

    With include_zero the n = ell term H(ell) H(0) is added.
    """
    require(ell >= 1, DomainError, f"shift must be positive, got {ell}")
    require(0 <= X <= table.limit, RangeError, f"X = {X} outside table range [0, {table.limit}]")
    total = _twelfths_product_sum(ell, 1, X - ell + 1, table) if X > ell else 0
    if include_zero and X >= ell:
        total += table[ell] * table[0]
    return Fraction(total, 144)


@dataclass
class ConvolutionReport:
    """Exact sharp sums on a grid with the asymptotic terms they are compared against."""
    ell: int
    grid: List[int] = field(default_factory=list)
    sharp: List[Fraction] = field(default_factory=list)
    main: List[float] = field(default_factory=list)
    secondary: List[float] = field(default_factory=list)
    residual: List[float] = field(default_factory=list)
    residual2: List[float] = field(default_factory=list)
    envelope: List[float] = field(default_factory=list)

    def __len__(self) -> int:
        return len(self.grid)

    def rows(self) -> List[Dict]:
        """One CSV row per grid point, columns in report order."""
        rows = []
        for i, X in enumerate(self.grid):
            values = [X, self.sharp[i].numerator, self.sharp[i].denominator, self.main[i],
                      self.secondary[i], self.residual[i], self.residual2[i]]
            rows.append(dict(zip(CSV_COLUMNS, values)))
        return rows


def prefix_series(ell: int, grid: Sequence[int], table: ClassNumberTable) -> ConvolutionReport:
    """
    S_l(X) at every grid point in one pass over the table.

    Args:
        ell: Positive shift
        grid: Strictly increasing positive integers
        table: Class number table with limit >= max(grid) + ell

    Returns:
        ConvolutionReport: exact sums with main/secondary terms and residuals
    """
    grid = [int(X) for X in grid]
    require(all(a < b for a, b in zip(grid, grid[1:])), DomainError, "grid must be strictly increasing")
    require(not grid or grid[0] >= 1, DomainError, "grid points must be positive")
    report = ConvolutionReport(ell)
    if not grid:
        return report
    _check_shift(ell, grid[-1], table)

    running = 0
    previous = 0
    for X in grid:
        running += _twelfths_product_sum(ell, previous + 1, X + 1, table)
        previous = X
        exact = Fraction(running, 144)
        main = main_term(ell, X)
        secondary = secondary_term(ell, X)
        report.grid.append(X)
        report.sharp.append(exact)
        report.main.append(main)
        report.secondary.append(secondary)
        report.residual.append(float(exact) - main)
        report.residual2.append(float(exact) - main - secondary)
        report.envelope.append(error_envelope(ell, X))

    logger.info(f"Computed S_{ell}(X) on {len(grid)} grid points up to {grid[-1]}")
    return report


def smooth_sum(ell: int, X: float, table: ClassNumberTable,
               weight: SmoothWeightSpec = DEFAULT_WEIGHT) -> float:
    """
    Smoothed sum_{m >= 1} H(m) H(m+ell) w((m+ell)/X).

    Terms are kept where |log((m+ell)/X)| <= support radius and accumulated
    with compensated summation.

    Args:
        ell: Positive shift
        X: Positive scale
        table: Class number table covering X e^{radius}
        weight: Cutoff weight

    Returns:
        float: smoothed sum (0 for ell = 2 mod 4)
    """
    require(ell >= 1, DomainError, f"shift must be positive, got {ell}")
    require(X > 0, DomainError, f"scale must be positive, got {X}")
    k_max = math.floor(X * math.exp(weight.support_radius))
    require(math.ceil(X * math.exp(weight.support_radius)) <= table.limit, RangeError,
            f"smooth sum at X={X} needs table limit {math.ceil(X * math.exp(weight.support_radius))}, "
            f"have {table.limit}")

    m_lo = max(1, math.ceil(X * math.exp(-weight.support_radius)) - ell)
    m_hi = k_max - ell
    partials = []
    for lo in range(m_lo, m_hi + 1, SUM_CHUNK):
        hi = min(lo + SUM_CHUNK, m_hi + 1)
        coeffs = table.twelve_times(lo, hi) * table.twelve_times(lo + ell, hi + ell)
        k = np.arange(lo + ell, hi + ell, dtype=np.float64)
        partials.append(math.fsum(coeffs / 144.0 * weight.weight(k / X)))
    return math.fsum(partials)


def smooth_prediction(ell: int, X: float, weight: SmoothWeightSpec = DEFAULT_WEIGHT) -> float:
    """W(2) res_32 X^2 + W(3/2) res_1 X^{3/2}."""
    coeff = coefficients(ell)
    return (mellin_W(weight, 2).real * coeff.res_32 * X ** 2
            + mellin_W(weight, 1.5).real * coeff.res_1 * X ** 1.5)


def fit_error_exponent(ell: int, grid: Sequence[int], table: ClassNumberTable,
                       subtract_secondary: bool = False) -> float:
    """
    Log-log slope of |S_l(X) - main [- secondary]| over the grid.

    Args:
        ell: Positive shift
        grid: At least FIT_MIN_POINTS points spanning FIT_MIN_DECADES decades
        table: Class number table
        subtract_secondary: Also remove the conjectured X^{3/2} term

    Returns:
        float: fitted exponent

    Raises:
        DegenerateGridError: grid too short or too narrow
        ZeroResidualError: every residual vanishes (ell = 2 mod 4)
    """
    grid = sorted(int(X) for X in grid)
    if len(grid) < FIT_MIN_POINTS or grid[0] < 1 or math.log10(grid[-1] / grid[0]) < FIT_MIN_DECADES:
        raise DegenerateGridError(
            f"error fit needs >= {FIT_MIN_POINTS} points spanning {FIT_MIN_DECADES} decades")

    report = prefix_series(ell, grid, table)
    residuals = report.residual2 if subtract_secondary else report.residual
    points = [(X, abs(r)) for X, r in zip(report.grid, residuals) if r != 0]
    if not points:
        raise ZeroResidualError(f"every residual vanishes for ell={ell}")
    if len(points) < 2:
        raise DegenerateGridError("fewer than two nonzero residuals")

    log_x = np.log([X for X, _ in points])
    log_r = np.log([r for _, r in points])
    slope = float(np.polyfit(log_x, log_r, 1)[0])
    logger.info(f"Error exponent for ell={ell} (subtract_secondary={subtract_secondary}): {slope:.4f}")
    return slope
