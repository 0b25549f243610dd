"""Special functions: incomplete gamma, the G_{3/2} integral and the 2F1 lemma"""
import cmath
import math
from typing import Callable, List, NamedTuple, Sequence, Tuple, Union

import mpmath
import numpy as np
from scipy.integrate import quad
from scipy.special import erfcx

from ..config import get_config_dict
from ..utils.logger import logger
from .exceptions import DomainError, PreconditionError, require

config = get_config_dict()
QUAD_EPSABS = config["QUAD_EPSABS"]
QUAD_EPSREL = config["QUAD_EPSREL"]
QUAD_LIMIT = config["QUAD_LIMIT"]
G32_EPSREL = config["G32_EPSREL"]
G32_RAY_OFFSET = config["G32_RAY_OFFSET"]
G32_ENVELOPE_EPSILON = config["G32_ENVELOPE_EPSILON"]
GAMMA_ASYMPTOTIC_CUTOFF = config["GAMMA_ASYMPTOTIC_CUTOFF"]
GAMMA_SERIES_TERMS = config["GAMMA_SERIES_TERMS"]

SQRT_PI = math.sqrt(math.pi)
# e^{-46} ~ 1e-20, far below the relative target of every quadrature here
DECAY_CUTOFF = 46.0

Number = Union[float, complex]


class QuadResult(NamedTuple):
    value: complex
    error: float


def quad_complex(func: Callable[[float], Number], a: float, b: float,
                 epsrel: float = QUAD_EPSREL, limit: int = QUAD_LIMIT) -> QuadResult:
    """Adaptive Gauss-Kronrod quadrature of a complex-valued integrand on [a, b]."""
    value, error = quad(func, a, b, epsabs=QUAD_EPSABS, epsrel=epsrel,
                        limit=limit, complex_func=True)
    return QuadResult(complex(value), abs(error))


def incomplete_gamma_erfc_path(y: Number) -> Number:
    """
    e^y * Gamma(-1/2, y) from the complementary error function.

    Gamma(-1/2, y) = 2 e^{-y} / sqrt(y) - 2 sqrt(pi) erfc(sqrt(y)); the scaled
    erfcx keeps the e^{-y} factor out of both terms.
    """
    root = np.sqrt(y)
    return 2.0 / root - 2.0 * SQRT_PI * erfcx(root)


def incomplete_gamma_series_path(y: Number) -> Number:
    """
    e^y * Gamma(-1/2, y) from the large-y asymptotic series.

    y^{-3/2} (1 - 3/(2y) + 15/(4y^2) - ...), summed until the terms stop
    shrinking or drop below double precision. Stopping at the smallest term,
    only half of it is kept.
    """
    term = 1.0 + 0j if isinstance(y, complex) else 1.0
    total = term
    for k in range(1, GAMMA_SERIES_TERMS):
        nxt = term * (-0.5 - k) / y
        if abs(nxt) < 1e-17 * abs(total):
            break
        if abs(nxt) >= abs(term):
            total -= term / 2
            break
        total += nxt
        term = nxt
    return total * y ** -1.5


def incomplete_gamma_scaled(y: Number) -> Number:
    """e^y * Gamma(-1/2, y) for Re y > 0, choosing the stable path by |y|."""
    if abs(y) > GAMMA_ASYMPTOTIC_CUTOFF:
        return incomplete_gamma_series_path(y)
    return incomplete_gamma_erfc_path(y)


def incomplete_gamma_upper_half(y: float) -> float:
    """
    Upper incomplete gamma function Gamma(-1/2, y) for real y > 0.

    Args:
        y: Positive real argument

    Returns:
        float: Gamma(-1/2, y)
    """
    require(y > 0, DomainError, f"Gamma(-1/2, y) needs y > 0, got {y}")
    return float(math.exp(-y) * incomplete_gamma_scaled(float(y)))


def _g32_ray_angle(tau: float) -> float:
    if tau == 0:
        return 0.0
    return math.copysign(math.pi / 2 - G32_RAY_OFFSET, tau)


def g32_with_error(s: complex, n1: int, n2: int) -> QuadResult:
    """
    G_{3/2}(s, n1, n2) = int_0^inf y^{s+1/2} Gamma(-1/2, n1 y) Gamma(-1/2, n2 y) e^{n1 y} dy/y.

    The integrand is y^{s-1/2} S(n1 y) S(n2 y) e^{-n2 y} with S(z) = e^z Gamma(-1/2, z).
    For Im s != 0 the path is the ray y = r e^{i theta} with |theta| = pi/2 - offset
    on the side of Im s, which turns the e^{-pi |Im s| / 2} decay into an explicit
    prefactor. The path splits at r = 1/n1 and is cut where e^{-n2 r cos theta}
    reaches e^{-46}; the cut tail is bounded with |S(z)| <= |z|^{-3/2} (Re z >= 0).

    Args:
        s: Complex parameter with Re s > 1/2
        n1: Smaller positive integer
        n2: Larger positive integer

    Returns:
        QuadResult: value (real for real s) and an error bound made of the
        quadrature error estimates plus the bound on the cut tail
    """
    s = complex(s)
    sigma, tau = s.real, s.imag
    require(sigma > 0.5, DomainError, f"G_3/2 integral converges for Re s > 1/2, got {s}")
    require(1 <= n1 < n2, PreconditionError, f"G_3/2 needs 1 <= n1 < n2, got ({n1}, {n2})")

    theta = _g32_ray_angle(tau)
    cos_theta = math.cos(theta)
    knot = 1.0 / n1
    cut = knot + DECAY_CUTOFF / (n2 * cos_theta)
    panel = 10.0 / n2

    if tau == 0:
        def body(r: float) -> float:
            return (r ** (sigma - 0.5) * incomplete_gamma_scaled(n1 * r)
                    * incomplete_gamma_scaled(n2 * r) * math.exp(-n2 * r))

        def head(t: float) -> float:
            # r = t^2 softens the r^{s-3/2} endpoint behaviour
            return 2.0 * t * body(t * t)

        total, error = quad(head, 0.0, math.sqrt(knot), epsabs=0.0, epsrel=G32_EPSREL,
                            limit=QUAD_LIMIT)
        lo = knot
        while lo < cut:
            hi = min(lo + panel, cut)
            part, part_error = quad(body, lo, hi, epsabs=0.0, epsrel=G32_EPSREL, limit=QUAD_LIMIT)
            total += part
            error += part_error
            lo = hi
        value = complex(total, 0.0)
        phase = 1.0
    else:
        ray = cmath.exp(1j * theta)

        def body(r: float) -> complex:
            y = r * ray
            return (cmath.exp((s - 0.5) * math.log(r)) * incomplete_gamma_scaled(n1 * y)
                    * incomplete_gamma_scaled(n2 * y) * cmath.exp(-n2 * y))

        def head(t: float) -> complex:
            return 2.0 * t * body(t * t)

        value, error = quad_complex(head, 0.0, math.sqrt(knot), G32_EPSREL)
        lo = knot
        while lo < cut:
            hi = min(lo + panel, cut)
            part = quad_complex(body, lo, hi, G32_EPSREL)
            value += part.value
            error += part.error
            lo = hi
        rotation = cmath.exp(1j * theta * (s + 0.5))
        phase = abs(rotation)
        value *= rotation
        error *= phase

    a = sigma - 2.5
    tail = (phase * (n1 * n2) ** -1.5 * (n2 * cos_theta) ** -a
            * float(mpmath.gammainc(a, n2 * cut * cos_theta)))
    logger.debug(f"g32(s={s}, n1={n1}, n2={n2}): cut at r={cut:.3g}, tail bound {tail:.3g}")
    return QuadResult(value, abs(error) + tail)


def g32(s: complex, n1: int, n2: int) -> complex:
    """G_{3/2}(s, n1, n2); see g32_with_error."""
    return g32_with_error(s, n1, n2).value


def g32_envelope(s: complex, n1: int, n2: int, eps: float = G32_ENVELOPE_EPSILON) -> float:
    """
    Growth envelope |s|^{Re s-2+eps} n2^{-Re s} e^{-pi |Im s|/2} (|s|^{1/2}/sqrt(n2) + 1/sqrt(n1)).
    """
    s = complex(s)
    size = abs(s)
    return (size ** (s.real - 2 + eps) * n2 ** -s.real * math.exp(-math.pi * abs(s.imag) / 2)
            * (math.sqrt(size) / math.sqrt(n2) + 1 / math.sqrt(n1)))


def calibrate_g32(sigma: float, heights: Sequence[float], n1: int = 1, n2: int = 2,
                  eps: float = G32_ENVELOPE_EPSILON) -> List[Tuple[float, float]]:
    """
    Constants K = |G_{3/2}(sigma + i t)| / envelope at each height t.

    Args:
        sigma: Real part, > 1/2
        heights: Imaginary parts to sample
        n1, n2: Integral parameters
        eps: Envelope exponent slack

    Returns:
        List[Tuple[float, float]]: (t, K) per height
    """
    calibration = []
    for t in heights:
        s = complex(sigma, t)
        k = abs(g32(s, n1, n2)) / g32_envelope(s, n1, n2, eps)
        logger.debug(f"G_3/2 envelope constant at t={t}: K={k:.6g}")
        calibration.append((float(t), k))
    return calibration


def _check_hyp2f1_args(s: complex, m: int, ell: int, min_real: float) -> None:
    require(s.real > min_real, DomainError, f"2F1 integral needs Re s > {min_real}, got {s}")
    require(1 <= m <= ell - 1, PreconditionError, f"2F1 needs 1 <= m <= ell - 1, got m={m}, ell={ell}")


def hyp2f1_bounding(s: complex, m: int, ell: int) -> complex:
    """
    2F1(3/2, 1; s+3/2 | 1 - ell/m) from its Euler integral.

    (s+1/2) int_0^1 (1-t)^{s-1/2} (1 - z t)^{-3/2} dt with z = 1 - ell/m. The
    substitution u = (1-t)^p, p = Re s + 1/2, leaves only the bounded factor
    u^{i Im s / p}; the u-integral is then taken on the scale u = e^{-v}.

    Args:
        s: Complex parameter, Re s > -1/2
        m: Integer with 1 <= m <= ell - 1
        ell: Shift

    Returns:
        complex: 2F1(3/2, 1; s + 3/2 | 1 - ell/m)
    """
    s = complex(s)
    _check_hyp2f1_args(s, m, ell, -0.5)
    z = 1.0 - ell / m
    p = s.real + 0.5
    kappa = s.imag / p

    def integrand(v: float) -> complex:
        t = -math.expm1(-v / p)
        return cmath.exp(-v * (1 + 1j * kappa)) * (1.0 - z * t) ** -1.5 / p

    result = quad_complex(integrand, 0.0, DECAY_CUTOFF)
    return (s + 0.5) * result.value


def hyp2f1_special(s: complex, m: int, ell: int) -> complex:
    """
    2F1(s, s+1/2; s+3/2 | 1 - ell/m) = (ell/m)^{1-s} 2F1(3/2, 1; s+3/2 | 1 - ell/m).

    Args:
        s: Complex parameter, Re s > 0
        m: Integer with 1 <= m <= ell - 1
        ell: Shift

    Returns:
        complex: the hypergeometric value
    """
    s = complex(s)
    _check_hyp2f1_args(s, m, ell, 0.0)
    return cmath.exp((1 - s) * math.log(ell / m)) * hyp2f1_bounding(s, m, ell)


def hyp2f1_envelope(s: complex, m: int, ell: int) -> float:
    """
    Explicit bound 2 |s + 1/2| (m/ell)^{Re s} on |hyp2f1_special(s, m, ell)|.

    For Re s >= 0, (1-t)^{Re s - 1/2} <= (1-t)^{-1/2} in the Euler integral, and
    the resulting integral is 2 * 2F1(3/2, 1; 3/2 | 1 - ell/m) = 2 m/ell.
    """
    s = complex(s)
    return 2.0 * abs(s + 0.5) * (m / ell) ** s.real
