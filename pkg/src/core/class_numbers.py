"""Hurwitz and primitive class numbers for Hurwitz Correlations"""
import math
import sys
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator, List, NamedTuple, Optional, Tuple

import numpy as np

from ..config import get_config_dict
from ..utils.logger import logger
from .exceptions import (
    CapacityError,
    CellOverflowError,
    DomainError,
    RangeError,
    require,
)

config = get_config_dict()
CELL_MAX = config["CELL_MAX"]
MAX_SIEVE_LIMIT = config["MAX_SIEVE_LIMIT"]
MIN_BLOCK_SIZE = config["MIN_BLOCK_SIZE"]
DEFAULT_THREADS = config["DEFAULT_THREADS"]
SUM_CHUNK = config["SUM_CHUNK"]


class FormWeights(NamedTuple):
    """Weights of reduced triples (a, b, c); the two signs of 0 < b < a are folded together."""
    zero_diagonal: int   # (a, 0, a)
    inner_diagonal: int  # (a, b, a), 0 < b < a, only b > 0 is reduced
    edge_diagonal: int   # (a, a, a)
    zero: int            # (a, 0, c), c > a
    inner: int           # (a, +-b, c), c > a
    edge: int            # (a, a, c), c > a, -a is excluded


HURWITZ_WEIGHTS = FormWeights(6, 12, 4, 12, 24, 12)
CLASS_WEIGHTS = FormWeights(1, 1, 1, 1, 2, 1)


@dataclass(frozen=True)
class HurwitzValue:
    """Exact Hurwitz class number H(n), stored as the integer 12*H(n)."""
    n: int
    twelve_times: int

    @property
    def value(self) -> Fraction:
        return Fraction(self.twelve_times, 12)

    def __str__(self) -> str:
        return f"H({self.n}) = {self.value} ({self.twelve_times}/12)"


class _CellTable:
    """Read-only uint32 cells indexed by n = 0..limit."""

    def __init__(self, cells: np.ndarray):
        cells = np.array(cells, dtype=np.uint32, copy=True)
        require(cells.ndim == 1 and len(cells) >= 1, DomainError,
                "table cells must be a non-empty vector")
        cells.setflags(write=False)
        self._cells = cells

    @property
    def limit(self) -> int:
        return len(self._cells) - 1

    @property
    def cells(self) -> np.ndarray:
        return self._cells

    def __len__(self) -> int:
        return len(self._cells)

    def _check(self, n: int) -> None:
        require(0 <= n <= self.limit, RangeError,
                f"index {n} outside table range [0, {self.limit}]")

    def __eq__(self, other: object) -> bool:
        return type(other) is type(self) and np.array_equal(self._cells, other._cells)

    __hash__ = None  # type: ignore[assignment]


class ClassNumberTable(_CellTable):
    """
    Dense table of 12*H(n) for 0 <= n <= limit.

    Cell 0 is stored as 0; the convention value 12*H(0) = -1 is supplied
    by the accessors.
    """

    def __getitem__(self, n: int) -> int:
        self._check(n)
        return -1 if n == 0 else int(self._cells[n])

    def twelve_times(self, start: int, stop: int) -> np.ndarray:
        """Return 12*H(n) for start <= n < stop as int64."""
        require(0 <= start <= stop <= len(self), RangeError,
                f"slice [{start}, {stop}) outside table range [0, {self.limit}]")
        values = self._cells[start:stop].astype(np.int64)
        if start == 0 and stop > 0:
            values[0] = -1
        return values

    @property
    def values(self) -> np.ndarray:
        return self.twelve_times(0, len(self))

    def value(self, n: int) -> Fraction:
        return Fraction(self[n], 12)

    def hurwitz(self, n: int) -> HurwitzValue:
        return HurwitzValue(n, self[n])

    def __repr__(self) -> str:
        return f"ClassNumberTable(limit={self.limit})"


class PrimitiveClassTable(_CellTable):
    """Table of primitive class counts h~(-n) for 0 <= n <= limit (0 off discriminants)."""

    def __getitem__(self, n: int) -> int:
        self._check(n)
        return int(self._cells[n])

    @property
    def values(self) -> np.ndarray:
        return self._cells.astype(np.int64)

    def __repr__(self) -> str:
        return f"PrimitiveClassTable(limit={self.limit})"


def reduced_forms(n: int) -> Iterator[Tuple[int, int, int]]:
    """
    Enumerate reduced triples (a, b, c) with 4ac - b^2 = n.

    Reduced means -a < b <= a <= c, with b >= 0 when a = c. For each |b| of the
    right parity, the divisors a of (n + b^2)/4 with |b| <= a <= sqrt((n + b^2)/4)
    are found by trial division.

    Args:
        n: Positive discriminant index (discriminant is -n)

    Yields:
        Tuple[int, int, int]: reduced triples, b and -b listed separately
    """
    if n <= 0 or n % 4 in (1, 2):
        return
    b = n % 2
    while 3 * b * b <= n:
        m = (n + b * b) // 4
        for a in range(max(b, 1), math.isqrt(m) + 1):
            if m % a:
                continue
            c = m // a
            yield a, b, c
            if 0 < b < a < c:
                yield a, -b, c
        b += 2


def form_weight(a: int, b: int, c: int) -> int:
    """Twelve times the Hurwitz weight of a reduced triple."""
    if a == b == c:
        return 4
    if b == 0 and a == c:
        return 6
    return 12


def hurwitz_single(n: int) -> HurwitzValue:
    """
    Compute 12*H(n) for one n, independently of the sieve.

    Args:
        n: Nonnegative integer

    Returns:
        HurwitzValue: exact value; 0 for n = 1, 2 mod 4 and -1 for n = 0
    """
    require(n >= 0, DomainError, f"H(n) needs n >= 0, got {n}")
    if n == 0:
        return HurwitzValue(0, -1)
    return HurwitzValue(n, sum(form_weight(a, b, c) for a, b, c in reduced_forms(n)))


def primitive_class_number(n: int) -> int:
    """Number of classes of primitive positive-definite forms of discriminant -n."""
    require(n >= 1, DomainError, f"h~(-n) needs n >= 1, got {n}")
    return sum(1 for a, b, c in reduced_forms(n) if math.gcd(math.gcd(a, b), c) == 1)


def _square_divisor_quotients(n: int) -> Iterator[int]:
    """Yield n/f^2 over f^2 | n whose quotient is a discriminant index (0 or 3 mod 4)."""
    f = 1
    while f * f <= n:
        if n % (f * f) == 0 and (n // (f * f)) % 4 in (0, 3):
            yield n // (f * f)
        f += 1


def total_class_number(n: int) -> int:
    """h(-n): classes of all (not only primitive) forms, summed over square divisors."""
    require(n >= 1, DomainError, f"h(-n) needs n >= 1, got {n}")
    return sum(primitive_class_number(m) for m in _square_divisor_quotients(n))


def reassemble_hurwitz(n: int, primitive: Optional[PrimitiveClassTable] = None) -> int:
    """
    Rebuild 12*H(n) from primitive class counts.

    12*H(n) = sum over f^2 | n of w(n/f^2) * h~(-n/f^2), with w(3) = 4,
    w(4) = 6 and w(m) = 12 otherwise.

    Args:
        n: Positive integer
        primitive: Optional precomputed table; computed per value when absent

    Returns:
        int: 12*H(n)
    """
    require(n >= 1, DomainError, f"reassembly needs n >= 1, got {n}")
    total = 0
    for m in _square_divisor_quotients(n):
        count = primitive[m] if primitive is not None else primitive_class_number(m)
        total += {3: 4, 4: 6}.get(m, 12) * count
    return total


def _partition(limit: int, threads: int) -> List[Tuple[int, int]]:
    """Split 1..limit into at most `threads` contiguous blocks [n0, n1)."""
    blocks = max(1, min(threads, limit // MIN_BLOCK_SIZE))
    size = -(-limit // blocks)
    return [(n0, min(n0 + size, limit + 1)) for n0 in range(1, limit + 1, size)]


def _accumulate_block(n0: int, n1: int, weights: FormWeights, primitive: bool) -> np.ndarray:
    """
    Weighted reduced-triple counts for n0 <= n < n1.

    For fixed (a, b) the discriminant indices n = 4ac - b^2 form an arithmetic
    progression of step 4a in c, so every c-range is one strided slice update.
    """
    out = np.zeros(n1 - n0, dtype=np.int64)
    a_max = math.isqrt((n1 - 1) // 3)
    for a in range(1, a_max + 1):
        step = 4 * a
        for b in range(a + 1):
            bb = b * b
            if b == 0:
                w_diag, w_off = weights.zero_diagonal, weights.zero
            elif b == a:
                w_diag, w_off = weights.edge_diagonal, weights.edge
            else:
                w_diag, w_off = weights.inner_diagonal, weights.inner
            g = math.gcd(a, b) if primitive else 1

            n_diag = 4 * a * a - bb
            if n0 <= n_diag < n1 and g == 1:
                out[n_diag - n0] += w_diag

            c_lo = max(a + 1, -(-(n0 + bb) // step))
            c_hi = (n1 - 1 + bb) // step
            if c_lo > c_hi:
                continue
            stop = c_hi * step - bb - n0 + 1
            if g == 1:
                out[c_lo * step - bb - n0:stop:step] += w_off
                continue
            # gcd(a, b, c) = gcd(g, c): keep the c residues prime to g
            for r in range(1, g):
                if math.gcd(r, g) != 1:
                    continue
                c_first = c_lo + (r - c_lo) % g
                if c_first <= c_hi:
                    out[c_first * step - bb - n0:stop:step * g] += w_off
    return out


def _sieve_cells(limit: int, weights: FormWeights, primitive: bool,
                 threads: Optional[int], label: str) -> np.ndarray:
    require(limit >= 0, DomainError, f"sieve limit must be nonnegative, got {limit}")
    require(limit <= MAX_SIEVE_LIMIT and 4 * (limit + 1) < sys.maxsize, CapacityError,
            f"sieve limit {limit} exceeds the 4-byte cell capacity (max {MAX_SIEVE_LIMIT})")
    threads = threads or DEFAULT_THREADS
    try:
        cells = np.zeros(limit + 1, dtype=np.uint32)
    except MemoryError as e:
        raise CapacityError(f"cannot allocate {limit + 1} cells: {e}") from e
    if limit == 0:
        return cells

    blocks = _partition(limit, threads)
    start = time.perf_counter()

    def work(block: Tuple[int, int]) -> None:
        n0, n1 = block
        counts = _accumulate_block(n0, n1, weights, primitive)
        peak = int(counts.max())
        if peak > CELL_MAX:
            raise CellOverflowError(f"cell value {peak} in [{n0}, {n1}) exceeds {CELL_MAX}")
        cells[n0:n1] = counts
        logger.debug(f"{label} block [{n0}, {n1}) done, peak cell {peak}")

    if len(blocks) == 1:
        work(blocks[0])
    else:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            list(pool.map(work, blocks))

    elapsed = time.perf_counter() - start
    logger.info(f"Sieved {label} to {limit} in {elapsed:.2f}s "
                f"({len(blocks)} blocks, {threads} threads)")
    return cells


def sieve_hurwitz(limit: int, threads: Optional[int] = None) -> ClassNumberTable:
    """
    Tabulate 12*H(n) for 0 <= n <= limit.

    Every reduced triple with 4ac - b^2 <= limit contributes 12, except
    (a, 0, a) with 6 and (a, a, a) with 4.

    Args:
        limit: Largest n tabulated
        threads: Worker count (default from config / HCN_THREADS)

    Returns:
        ClassNumberTable: immutable table
    """
    return ClassNumberTable(_sieve_cells(limit, HURWITZ_WEIGHTS, False, threads, "H(n)"))


def sieve_primitive(limit: int, threads: Optional[int] = None) -> PrimitiveClassTable:
    """Tabulate h~(-n) for 0 <= n <= limit with the same block sieve."""
    return PrimitiveClassTable(_sieve_cells(limit, CLASS_WEIGHTS, True, threads, "h~(-n)"))


def _growth_ratios(table: ClassNumberTable, start: int, stop: int) -> np.ndarray:
    n = np.arange(start, stop, dtype=np.float64)
    return (table.cells[start:stop] / 12.0) / (np.sqrt(n) * (1.0 + np.log(n)))


def growth_constant(table: ClassNumberTable) -> float:
    """Measured C = max over 1 <= n <= limit of H(n) / (sqrt(n) (1 + log n))."""
    best = 0.0
    for start in range(1, table.limit + 1, SUM_CHUNK):
        stop = min(start + SUM_CHUNK, table.limit + 1)
        best = max(best, float(_growth_ratios(table, start, stop).max()))
    return best


def growth_profile(table: ClassNumberTable) -> List[Tuple[int, float]]:
    """
    Running maximum of H(n) / (sqrt(n) (1 + log n)) at each power of ten.

    Returns:
        List[Tuple[int, float]]: (10^k, max ratio over n <= 10^k)
    """
    profile = []
    best = 0.0
    lo = 1
    decade = 10
    while decade <= table.limit:
        best = max(best, float(_growth_ratios(table, lo, decade + 1).max()))
        profile.append((decade, best))
        lo = decade + 1
        decade *= 10
    return profile
