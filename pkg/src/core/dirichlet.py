"""Truncated Dirichlet series D_l(s) and smooth cutoff weights"""
import cmath
import math
from dataclasses import dataclass
from typing import Callable, Dict, Optional

import numpy as np

from ..config import get_config_dict
from ..utils.logger import logger
from .class_numbers import ClassNumberTable, growth_constant
from .exceptions import (
    DomainError,
    PreconditionError,
    RangeError,
    UnsupportedFamilyError,
    require,
)
from .special import quad_complex

config = get_config_dict()
SMOOTH_WEIGHT_FAMILY = config["SMOOTH_WEIGHT_FAMILY"]
SMOOTH_SUPPORT_RADIUS = config["SMOOTH_SUPPORT_RADIUS"]
SUM_CHUNK = config["SUM_CHUNK"]


@dataclass(frozen=True)
class SmoothWeightSpec:
    """
    Smooth cutoff weight w on (0, inf) with its Mellin transform.

    Attributes:
        family: Registry name
        support_radius: w(x) is negligible for |log x| beyond this radius
        weight: Vectorized w(x)
        mellin: Closed-form W(s), or None when only quadrature is available
    """
    family: str
    support_radius: float
    weight: Callable[[np.ndarray], np.ndarray]
    mellin: Optional[Callable[[complex], complex]] = None


def _exp_log_square(x: np.ndarray) -> np.ndarray:
    return np.exp(-np.log(x) ** 2)


def _exp_log_square_mellin(s: complex) -> complex:
    return math.sqrt(math.pi) * cmath.exp(complex(s) ** 2 / 4)


def _compact_bump(x: np.ndarray) -> np.ndarray:
    # exp(-1 / (1 - log^2 x)) on |log x| < 1, zero outside
    u2 = np.minimum(np.log(x) ** 2, 1.0)
    with np.errstate(divide="ignore"):
        return np.where(u2 < 1.0, np.exp(-1.0 / (1.0 - u2)), 0.0)


DEFAULT_WEIGHT = SmoothWeightSpec(
    SMOOTH_WEIGHT_FAMILY, SMOOTH_SUPPORT_RADIUS, _exp_log_square, _exp_log_square_mellin)

WEIGHT_FAMILIES: Dict[str, SmoothWeightSpec] = {
    DEFAULT_WEIGHT.family: DEFAULT_WEIGHT,
    "compact-bump": SmoothWeightSpec("compact-bump", 1.0, _compact_bump),
}


def get_weight(family: str) -> SmoothWeightSpec:
    """Look up a registered weight family."""
    if family not in WEIGHT_FAMILIES:
        raise UnsupportedFamilyError(
            f"unknown weight family {family!r}; available: {', '.join(WEIGHT_FAMILIES)}")
    return WEIGHT_FAMILIES[family]


def mellin_W(spec: SmoothWeightSpec, s: complex) -> complex:
    """
    Closed-form Mellin transform W(s) = int_0^inf x^{s-1} w(x) dx.

    Args:
        spec: Weight specification
        s: Complex argument

    Returns:
        complex: W(s); sqrt(pi) e^{s^2/4} for the default family
    """
    if spec.mellin is None:
        raise UnsupportedFamilyError(f"weight family {spec.family!r} has no closed-form Mellin transform")
    return complex(spec.mellin(complex(s)))


def mellin_quadrature(spec: SmoothWeightSpec, s: complex) -> complex:
    """Numerical Mellin transform, integrating e^{s u} w(e^u) over u = log x."""
    s = complex(s)
    radius = spec.support_radius + abs(s.real)

    def integrand(u: float) -> complex:
        return cmath.exp(s * u) * float(spec.weight(np.float64(math.exp(u))))

    return quad_complex(integrand, -radius, radius).value


@dataclass(frozen=True)
class TruncatedSeriesValue:
    value: complex
    terms_used: int
    tail_bound: float


def dirichlet_tail_bound(ell: int, s: complex, N: int, growth: float) -> float:
    """
    Bound on sum over n > N of |H(n) H(n+ell) (n+ell)^{-s-1/2}|.

    With H(n) <= C sqrt(n) (1 + log n), each term is at most C^2 k^{-a} (1 + log k)^2
    at k = n + ell, a = Re s - 1/2; that majorant decreases for k >= 3 and its
    integral from K = N + ell has the closed form used below.

    Args:
        ell: Shift
        s: Complex parameter, Re s > 3/2
        N: Last summed index
        growth: Constant C

    Returns:
        float: tail bound (0 when ell = 2 mod 4)
    """
    s = complex(s)
    require(s.real > 1.5, DomainError, f"D_l(s) converges absolutely for Re s > 3/2, got {s}")
    if ell % 4 == 2:
        return 0.0
    alpha = s.real - 0.5
    beta = alpha - 1.0
    start = N + ell
    explicit = 0.0
    while start < 3:
        start += 1
        explicit += start ** -alpha * (1 + math.log(start)) ** 2
    log0 = math.log(start)
    integral = math.exp(-beta * log0) * (
        (1 + log0) ** 2 / beta + 2 * (1 + log0) / beta ** 2 + 2 / beta ** 3)
    return growth ** 2 * (explicit + integral)


def truncated_dirichlet(ell: int, s: complex, N: int, table: ClassNumberTable,
                        growth: Optional[float] = None) -> TruncatedSeriesValue:
    """
    Partial sum of D_l(s) = sum_{n >= 1} H(n) H(n+ell) (n+ell)^{-s-1/2} over n <= N.

    Args:
        ell: Shift, >= 1
        s: Complex parameter, Re s > 3/2
        N: Number of terms
        table: Class number table with limit >= N + ell
        growth: Growth constant C (measured from the table when omitted)

    Returns:
        TruncatedSeriesValue: partial sum, terms used and certified tail bound
    """
    s = complex(s)
    require(s.real > 1.5, DomainError, f"D_l(s) converges absolutely for Re s > 3/2, got {s}")
    require(ell >= 1 and N >= 0, DomainError, f"need ell >= 1 and N >= 0, got ell={ell}, N={N}")
    require(N + ell <= table.limit, RangeError,
            f"N + ell = {N + ell} exceeds table limit {table.limit}")

    if ell % 4 == 2:
        return TruncatedSeriesValue(0j, N, 0.0)

    exponent = -(s + 0.5)
    real_parts = []
    imag_parts = []
    for start in range(1, N + 1, SUM_CHUNK):
        stop = min(start + SUM_CHUNK, N + 1)
        coeffs = table.twelve_times(start, stop) * table.twelve_times(start + ell, stop + ell)
        k = np.arange(start + ell, stop + ell, dtype=np.float64)
        terms = coeffs / 144.0 * np.exp(exponent * np.log(k))
        real_parts.append(math.fsum(terms.real))
        imag_parts.append(math.fsum(terms.imag))

    if growth is None:
        growth = growth_constant(table)
    tail = dirichlet_tail_bound(ell, s, N, growth)
    value = complex(math.fsum(real_parts), math.fsum(imag_parts))
    if tail > abs(value) > 0:
        logger.warning(f"D_{ell}({s}) tail bound {tail:.3g} exceeds the partial sum at N={N}")
    return TruncatedSeriesValue(value, N, tail)


def richardson_limit(ell: int, s: complex, N1: int, N2: int, table: ClassNumberTable) -> complex:
    """
    Extrapolate D_l(s) to N -> inf from two truncations.

    The tail behaves like N^{-p} with p = Re s - 3/2, so
    D ~ S2 + (S2 - S1) / ((N2/N1)^p - 1).
    """
    s = complex(s)
    require(0 < N1 < N2, PreconditionError, f"need 0 < N1 < N2, got ({N1}, {N2})")
    growth = growth_constant(table)
    first = truncated_dirichlet(ell, s, N1, table, growth).value
    second = truncated_dirichlet(ell, s, N2, table, growth).value
    p = s.real - 1.5
    return second + (second - first) / ((N2 / N1) ** p - 1)
