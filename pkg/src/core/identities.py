"""Exact class-number identities and the moment-exponent check"""
import cmath
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Callable, Dict, List, Optional, Sequence, Tuple

import numpy as np
from pydantic import BaseModel, Field, model_validator
from sympy import divisors

from ..config import get_config_dict
from ..utils.logger import logger
from ..utils.utils import decade_span, geometric_grid, json_ready
from .arithmetic import is_fundamental_discriminant, kronecker_symbol, r3_table
from .class_numbers import ClassNumberTable, PrimitiveClassTable
from .convolution import sharp_sum
from .exceptions import (
    DegenerateGridError,
    DomainError,
    PreconditionError,
    RangeError,
    require,
)

config = get_config_dict()
R1_TOLERANCE = config["R1_TOLERANCE"]
R1_TEST_POINTS = config["R1_TEST_POINTS"]
VANISHING_SHIFTS = config["VANISHING_SHIFTS"]
MOMENT_ALPHAS = config["MOMENT_ALPHAS"]
MOMENT_TOLERANCE = config["MOMENT_TOLERANCE"]
MOMENT_MIN_POINTS = config["MOMENT_MIN_POINTS"]
MOMENT_MIN_DECADES = config["MOMENT_MIN_DECADES"]
MOMENT_CONFIDENT_LIMIT = config["MOMENT_CONFIDENT_LIMIT"]
GRID_RATIO = config["GRID_RATIO"]
MAX_WITNESSES = config["MAX_WITNESSES"]


class VerificationReport(BaseModel):
    """Outcome of one identity suite over a range."""
    suite: str
    range: List[int]
    checked: int = 0
    failures: int = 0
    max_discrepancy: float = 0.0
    exact: bool = True
    witnesses: List[Any] = Field(default_factory=list)
    parameters: Dict[str, Any] = Field(default_factory=dict)

    @model_validator(mode="after")
    def _witnesses_match_failures(self) -> "VerificationReport":
        if (self.failures == 0) != (len(self.witnesses) == 0):
            raise ValueError("failures must be zero exactly when there are no witnesses")
        return self

    @property
    def passed(self) -> bool:
        return self.failures == 0


class _Tally:
    """Accumulates check outcomes into a VerificationReport."""

    def __init__(self, suite: str, lo: int, hi: int, exact: bool = True):
        self.suite = suite
        self.range = [lo, hi]
        self.exact = exact
        self.checked = 0
        self.failures = 0
        self.max_discrepancy = 0.0
        self.witnesses: List[Any] = []

    def record(self, witness: Any, discrepancy: float, failed: bool) -> None:
        self.checked += 1
        self.max_discrepancy = max(self.max_discrepancy, float(discrepancy))
        if failed:
            self.failures += 1
            if len(self.witnesses) < MAX_WITNESSES:
                self.witnesses.append(witness)

    def report(self, **parameters: Any) -> VerificationReport:
        report = VerificationReport(
            suite=self.suite, range=self.range, checked=self.checked, failures=self.failures,
            max_discrepancy=self.max_discrepancy, exact=self.exact, witnesses=self.witnesses,
            parameters={k: json_ready(v) for k, v in parameters.items()})
        if report.passed:
            logger.info(f"Suite {self.suite}: {self.checked} checks passed")
        else:
            logger.warning(f"Suite {self.suite}: {self.failures} of {self.checked} checks failed, "
                           f"first witnesses {self.witnesses[:3]}")
        return report


def check_kronecker_hurwitz(n: int, table: ClassNumberTable) -> Fraction:
    """
    LHS - RHS of sum_{m^2 <= 4n} H(4n - m^2) = sum_{d | n} max(d, n/d).

    Args:
        n: Positive integer
        table: Class number table with limit >= 4n

    Returns:
        Fraction: exact discrepancy, 0 when the relation holds
    """
    require(n >= 1, DomainError, f"n must be positive, got {n}")
    require(4 * n <= table.limit, RangeError, f"4n = {4 * n} exceeds table limit {table.limit}")
    four_n = 4 * n
    twelfths = table[four_n] + 2 * sum(table[four_n - m * m] for m in range(1, math.isqrt(four_n) + 1))
    rhs = sum(max(d, n // d) for d in divisors(n))
    return Fraction(twelfths, 12) - rhs


def check_r3_identity(n: int, r3: int, table: ClassNumberTable) -> Fraction:
    """
    r3(n) - 12 (1 - (-n|2)) H(n) for fundamental -n.

    Args:
        n: Positive integer with -n a fundamental discriminant
        r3: Number of representations of n as a sum of three squares
        table: Class number table with limit >= n

    Returns:
        Fraction: exact discrepancy
    """
    require(n >= 1 and is_fundamental_discriminant(-n), PreconditionError,
            f"-{n} is not a fundamental discriminant")
    require(n <= table.limit, RangeError, f"n = {n} exceeds table limit {table.limit}")
    return Fraction(r3 - (1 - kronecker_symbol(-n, 2)) * table[n])


def r1_divisor_sides(ell: int, s: complex) -> Tuple[complex, complex]:
    """
    Both sides of the divisor-sum form of sum_{n >= 0} r1(n+ell) r1(n) (n+ell)^{1/2-s}.

    The left side runs over m1^2 - m2^2 = ell, m2 >= 0; the right side is
    2^{2s} sum over d | ell with d = ell/d mod 2 of (d + ell/d)^{1-2s}.

    Returns:
        Tuple[complex, complex]: (lhs, rhs)
    """
    require(ell >= 1, DomainError, f"shift must be positive, got {ell}")
    s = complex(s)
    lhs = 0j
    m2 = 0
    while 2 * m2 + 1 <= ell:
        n = m2 * m2
        m1 = math.isqrt(n + ell)
        if m1 * m1 == n + ell:
            weight = 2 * (1 if m2 == 0 else 2)
            lhs += weight * cmath.exp((0.5 - s) * math.log(n + ell))
        m2 += 1

    rhs = 0j
    for d in divisors(ell):
        if (d - ell // d) % 2 == 0:
            rhs += cmath.exp((1 - 2 * s) * math.log(d + ell // d))
    rhs *= cmath.exp(2 * s * math.log(2))
    return lhs, rhs


def check_r1_divisor_identity(ell: int, s: complex) -> float:
    """Absolute difference of the two sides of the r1 divisor-sum identity."""
    lhs, rhs = r1_divisor_sides(ell, s)
    return abs(lhs - rhs)


def check_vanishing(ell: int, X: int, table: ClassNumberTable) -> Fraction:
    """S_ell(X) for ell = 2 mod 4, where it vanishes identically."""
    require(ell % 4 == 2, PreconditionError, f"vanishing needs ell = 2 mod 4, got {ell}")
    return sharp_sum(ell, X, table)


@dataclass(frozen=True)
class MomentFit:
    """Fitted law sum_{n <= X} h~(-n)^alpha ~ constant * X^slope."""
    alpha: float
    slope: float
    constant: float
    low_confidence: bool

    @property
    def expected_slope(self) -> float:
        return 1 + self.alpha / 2


def moment_slope(alpha: float, grid: Sequence[int], primitive: PrimitiveClassTable) -> MomentFit:
    """
    Least-squares slope of log sum_{n <= X} h~(-n)^alpha against log X.

    Args:
        alpha: Positive moment
        grid: Increasing X values within the table
        primitive: Primitive class number table

    Returns:
        MomentFit: slope and constant; low_confidence when the grid spans
        under a decade or stays below the confident limit
    """
    require(alpha > 0, DomainError, f"alpha must be positive, got {alpha}")
    grid = sorted(int(X) for X in grid)
    if len(grid) < MOMENT_MIN_POINTS:
        raise DegenerateGridError(f"moment fit needs >= {MOMENT_MIN_POINTS} grid points, got {len(grid)}")
    require(grid[-1] <= primitive.limit, RangeError,
            f"grid reaches {grid[-1]} beyond table limit {primitive.limit}")

    powers = primitive.values[: grid[-1] + 1].astype(np.float64) ** alpha
    cumulative = np.cumsum(powers)
    sums = cumulative[grid]
    if np.any(sums <= 0):
        raise DegenerateGridError("moment sums vanish at the start of the grid")

    slope, intercept = np.polyfit(np.log(grid), np.log(sums), 1)
    low_confidence = decade_span(grid) < MOMENT_MIN_DECADES or grid[-1] < MOMENT_CONFIDENT_LIMIT
    if low_confidence:
        logger.warning(f"Moment fit for alpha={alpha} on {grid[0]}..{grid[-1]} is low confidence")
    return MomentFit(float(alpha), float(slope), float(math.exp(intercept)), low_confidence)


def run_kronecker_hurwitz(limit: int, table: ClassNumberTable) -> VerificationReport:
    """Kronecker-Hurwitz relation for every n <= limit."""
    require(4 * limit <= table.limit, RangeError,
            f"suite needs table limit {4 * limit}, have {table.limit}")
    tally = _Tally("kronecker-hurwitz", 1, limit)
    for n in range(1, limit + 1):
        discrepancy = check_kronecker_hurwitz(n, table)
        tally.record(n, abs(discrepancy), discrepancy != 0)
    return tally.report()


def run_r3(limit: int, table: ClassNumberTable) -> VerificationReport:
    """r3 identity for every fundamental -n with n <= limit."""
    require(limit <= table.limit, RangeError, f"suite needs table limit {limit}, have {table.limit}")
    r3 = r3_table(limit)
    tally = _Tally("r3", 1, limit)
    for n in range(1, limit + 1):
        if not is_fundamental_discriminant(-n):
            continue
        discrepancy = check_r3_identity(n, int(r3[n]), table)
        tally.record(n, abs(discrepancy), discrepancy != 0)
    return tally.report()


def run_r1_divisor(limit: int, points: Sequence[complex] = R1_TEST_POINTS) -> VerificationReport:
    """r1 divisor-sum identity for ell <= limit at each test point s."""
    tally = _Tally("r1-divisor", 1, limit, exact=False)
    for ell in range(1, limit + 1):
        for s in points:
            lhs, rhs = r1_divisor_sides(ell, s)
            discrepancy = abs(lhs - rhs)
            failed = discrepancy > R1_TOLERANCE * (1 + abs(rhs))
            tally.record([ell, json_ready(complex(s))], discrepancy, failed)
    return tally.report(points=[json_ready(complex(s)) for s in points], tolerance=R1_TOLERANCE)


def run_vanishing(limit: int, table: ClassNumberTable,
                  shifts: Sequence[int] = VANISHING_SHIFTS) -> VerificationReport:
    """S_ell(limit) = 0 for each shift ell = 2 mod 4 that fits in the table."""
    usable = [ell for ell in shifts if limit + ell <= table.limit]
    skipped = [ell for ell in shifts if ell not in usable]
    if skipped:
        logger.warning(f"Vanishing suite skips shifts {skipped} beyond table limit {table.limit}")
    require(bool(usable), RangeError, f"no shift fits X = {limit} in table limit {table.limit}")
    tally = _Tally("vanishing", 1, limit)
    for ell in usable:
        value = check_vanishing(ell, limit, table)
        tally.record(ell, abs(value), value != 0)
    return tally.report(shifts=usable)


def run_moment(limit: int, primitive: PrimitiveClassTable,
               alphas: Sequence[float] = MOMENT_ALPHAS,
               tolerance: float = MOMENT_TOLERANCE) -> VerificationReport:
    """
    Moment exponents 1 + alpha/2 over the decade below limit.

    Low-confidence fits are reported in the parameters but do not count as checks.
    """
    require(limit >= 30, DomainError, f"moment suite needs limit >= 30, got {limit}")
    grid = geometric_grid(max(3, limit // 10), GRID_RATIO, 5)
    grid = [X for X in grid if X <= limit]
    tally = _Tally("moment", grid[0], grid[-1], exact=False)
    slopes: Dict[str, float] = {}
    low_confidence: List[float] = []
    for alpha in alphas:
        fit = moment_slope(alpha, grid, primitive)
        slopes[str(alpha)] = fit.slope
        if fit.low_confidence:
            low_confidence.append(alpha)
            continue
        discrepancy = abs(fit.slope - fit.expected_slope)
        tally.record(alpha, discrepancy, discrepancy > tolerance)
    return tally.report(grid=grid, slopes=slopes, low_confidence=low_confidence, tolerance=tolerance)


# suite name -> (runner, table kind it consumes)
SUITES: Dict[str, Tuple[Callable[..., VerificationReport], Optional[str]]] = {
    "kronecker-hurwitz": (run_kronecker_hurwitz, "hurwitz"),
    "r3": (run_r3, "hurwitz"),
    "r1-divisor": (run_r1_divisor, None),
    "vanishing": (run_vanishing, "hurwitz"),
    "moment": (run_moment, "primitive"),
}
