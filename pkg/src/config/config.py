"""
Configuration file for Hurwitz Correlations
Customize settings here without modifying core code
"""
import os
import sys

from dotenv import load_dotenv

load_dotenv()


def _threads_from_env(raw: str) -> int:
    """Positive thread count from HCN_THREADS, or 0 when unset or unparsable."""
    try:
        return max(int(raw), 0)
    except ValueError:
        return 0


# --- Class Number Sieve ---
CELL_MAX = 2**32 - 1            # 12*H(n) is stored in unsigned 32-bit cells
MAX_SIEVE_LIMIT = 10**12        # cell width is guaranteed up to here
MIN_BLOCK_SIZE = 1 << 16        # smallest n-block handed to a worker
DEFAULT_THREADS = _threads_from_env(os.getenv("HCN_THREADS", "")) or (os.cpu_count() or 1)

# --- Representation Counts ---
MAX_R3_LIMIT = 10**7            # r3_table keeps two int64 arrays of this length (160 MB)

# --- Table Files ---
TABLE_MAGIC = b"HCN1"
TABLE_VERSION = 1
TABLE_HEADER_FORMAT = "<4sIQ"   # magic, version, limit
CHECKSUM_CHUNK_BYTES = 1024 * 1024

# --- Convolution Sums ---
SUM_CHUNK = 1 << 20             # int64 products are summed chunk by chunk
GRID_RATIO = 10 ** 0.25         # default geometric grid ratio
FIT_MIN_POINTS = 5
FIT_MIN_DECADES = 1.5

# --- Smooth Weight ---
SMOOTH_WEIGHT_FAMILY = "exp-log-square"
SMOOTH_SUPPORT_RADIUS = 6.1     # exp(-u^2) < 1e-16 beyond |log x| = 6.1

# --- Quadrature ---
QUAD_EPSABS = 1e-12
QUAD_EPSREL = 1e-10
QUAD_LIMIT = 200
G32_EPSREL = 1e-8
G32_RAY_OFFSET = 0.1            # rotated ray sits at pi/2 - offset
G32_ENVELOPE_EPSILON = 0.25
GAMMA_ASYMPTOTIC_CUTOFF = 30.0  # |y| above which the asymptotic series is used
GAMMA_SERIES_TERMS = 60

# --- Verification ---
R1_TOLERANCE = 1e-10
R1_TEST_POINTS = (1.0, 2.0, 2.5, 2 + 3j)
VANISHING_SHIFTS = (2, 6, 10, 14)
MOMENT_ALPHAS = (1.0, 2.0)
MOMENT_TOLERANCE = 0.02
MOMENT_MIN_POINTS = 3
MOMENT_MIN_DECADES = 1.0
MOMENT_CONFIDENT_LIMIT = 10**4
MAX_WITNESSES = 20              # failing inputs kept in a report

# --- Logging ---
ENABLE_LOGGING = True
LOG_FILE = os.getenv("HCN_LOG_FILE", "")  # empty = console only
LOG_LEVEL = os.getenv("HCN_LOG_LEVEL", "INFO").upper()  # DEBUG, INFO, WARNING, ERROR, CRITICAL

# --- Reports ---
TOOL_VERSION = "1.0.0"
CSV_COLUMNS = ["X", "S_num", "S_den", "main", "secondary", "residual", "residual2"]


def validate_config() -> bool:
    """
    Validate configuration values.

    Returns:
        bool: True if configuration is valid
    """
    try:
        assert DEFAULT_THREADS > 0, "DEFAULT_THREADS must be positive"
        assert MIN_BLOCK_SIZE > 0, "MIN_BLOCK_SIZE must be positive"
        assert SUM_CHUNK > 0, "SUM_CHUNK must be positive"
        assert GRID_RATIO > 1, "GRID_RATIO must exceed 1"
        assert SMOOTH_SUPPORT_RADIUS > 0, "SMOOTH_SUPPORT_RADIUS must be positive"
        assert 0 < QUAD_EPSREL < 1, "QUAD_EPSREL must be between 0 and 1"
        assert 0 < G32_EPSREL < 1, "G32_EPSREL must be between 0 and 1"
        assert 0 < G32_RAY_OFFSET < 1, "G32_RAY_OFFSET must be between 0 and 1"
        assert 0 < R1_TOLERANCE < 1, "R1_TOLERANCE must be between 0 and 1"
        assert FIT_MIN_POINTS >= 2 and MOMENT_MIN_POINTS >= 2
        assert len(TABLE_MAGIC) == 4, "TABLE_MAGIC must be 4 bytes"
        return True
    except AssertionError as e:
        print(f"Configuration validation failed: {e}", file=sys.stderr)
        return False
