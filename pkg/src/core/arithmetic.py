"""Elementary arithmetic functions for Hurwitz Correlations"""
import math
from fractions import Fraction
from typing import Union

import numpy as np
from sympy import divisors, factorint
from sympy.functions.combinatorial.numbers import jacobi_symbol

from ..config import get_config_dict
from .exceptions import CapacityError, DomainError, require

config = get_config_dict()
MAX_R3_LIMIT = config["MAX_R3_LIMIT"]


def sigma_nu(m: Union[int, Fraction], nu: int) -> Fraction:
    """
    Sum of nu-th powers of the divisors of m.

    Args:
        m: Integer or rational argument
        nu: Signed integer exponent

    Returns:
        Fraction: sigma_nu(m), or 0 when m is not a positive integer
    """
    m = Fraction(m)
    if m.denominator != 1 or m <= 0:
        return Fraction(0)
    return sum((Fraction(d) ** nu for d in divisors(m.numerator)), Fraction(0))


def odd_part(ell: int) -> int:
    """Return ell with every factor of 2 removed."""
    require(ell >= 1, DomainError, f"odd_part needs a positive integer, got {ell}")
    return ell >> ((ell & -ell).bit_length() - 1)


def kronecker_symbol(a: int, b: int) -> int:
    """
    Kronecker symbol (a|b).

    The factor 2 follows (a|2) = 0 for even a, 1 for a = +-1 mod 8 and -1 for
    a = +-3 mod 8; the odd part of b is handled by the Jacobi symbol.

    Args:
        a: Numerator
        b: Denominator

    Returns:
        int: -1, 0 or 1
    """
    require(a != 0 or b != 0, DomainError, "Kronecker symbol (0|0) is undefined")
    if b == 0:
        return 1 if abs(a) == 1 else 0

    result = 1
    if b < 0:
        b = -b
        if a < 0:
            result = -result

    twos = (b & -b).bit_length() - 1
    if twos:
        if a % 2 == 0:
            return 0
        if twos % 2 and a % 8 in (3, 5):
            result = -result
        b >>= twos

    if b == 1:
        return result
    return result * int(jacobi_symbol(a % b, b))


def is_squarefree(n: int) -> bool:
    """Check that no prime square divides n."""
    return all(e == 1 for e in factorint(abs(n)).values())


def is_fundamental_discriminant(d: int) -> bool:
    """
    Check whether a negative integer is a fundamental discriminant.

    Args:
        d: Negative discriminant candidate

    Returns:
        bool: True for d = 1 mod 4 squarefree, or d = 4m with m = 2, 3 mod 4 squarefree
    """
    require(d < 0, DomainError, f"fundamental discriminant test needs d < 0, got {d}")
    if d % 4 == 1:
        return is_squarefree(d)
    if d % 4 == 0:
        m = d // 4
        return m % 4 in (2, 3) and is_squarefree(m)
    return False


def r1(n: int) -> int:
    """Number of integers m with m^2 = n."""
    if n == 0:
        return 1
    if n < 0:
        return 0
    root = math.isqrt(n)
    return 2 if root * root == n else 0


def r2_table(limit: int) -> np.ndarray:
    """
    Count representations x^2 + y^2 = n for n <= limit by lattice enumeration.

    Args:
        limit: Largest n tabulated

    Returns:
        np.ndarray: int64 array, entry n is r2(n)
    """
    require(0 <= limit <= MAX_R3_LIMIT, CapacityError,
            f"r2 table limit {limit} outside [0, {MAX_R3_LIMIT}]")
    table = np.zeros(limit + 1, dtype=np.int64)
    for x in range(math.isqrt(limit) + 1):
        ys = np.arange(math.isqrt(limit - x * x) + 1, dtype=np.int64)
        # each nonzero coordinate carries two signs
        signs = np.where(ys == 0, 1, 2) * (1 if x == 0 else 2)
        table[x * x + ys * ys] += signs
    return table


def r3_table(limit: int) -> np.ndarray:
    """
    Count representations as a sum of three squares for n <= limit.

    r3(n) = sum over k in Z with k^2 <= n of r2(n - k^2).

    Args:
        limit: Largest n tabulated

    Returns:
        np.ndarray: int64 array, entry n is r3(n)
    """
    r2 = r2_table(limit)
    table = r2.copy()
    for k in range(1, math.isqrt(limit) + 1):
        shift = k * k
        table[shift:] += 2 * r2[: limit + 1 - shift]
    return table
