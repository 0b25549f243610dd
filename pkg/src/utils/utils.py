"""Utility functions for Hurwitz Correlations"""
import csv
import json
import math
import os
import sys
from fractions import Fraction
from typing import Any, Dict, List, Optional, Sequence

from ..config import get_config_dict
from ..utils.logger import logger

config = get_config_dict()
GRID_RATIO = config["GRID_RATIO"]


def save_json(data: Dict, filename: str) -> bool:
    """
    Save data to JSON file.

    Args:
        data: Dictionary to save
        filename: Target file path

    Returns:
        bool: Success status
    """
    try:
        directory = os.path.dirname(filename)
        if directory:
            os.makedirs(directory, exist_ok=True)
        with open(filename, 'w', encoding='utf-8') as f:
            json.dump(data, f, indent=2, default=str, ensure_ascii=False)
            f.write("\n")
        logger.debug(f"Saved JSON to {filename}")
        return True
    except (OSError, TypeError, ValueError) as e:
        logger.error(f"Error saving JSON: {e}")
        return False


def export_to_csv(data: List[Dict], filename: Optional[str] = None,
                  fieldnames: Optional[Sequence[str]] = None) -> bool:
    """
    Export rows to a CSV file, or to stdout when no filename is given.

    Args:
        data: List of dictionaries
        filename: Target file path (None or "-" for stdout)
        fieldnames: Column order (default: keys of the first row)

    Returns:
        bool: Success status
    """
    if not data and fieldnames is None:
        return False
    columns = list(fieldnames) if fieldnames is not None else list(data[0].keys())

    def write(stream) -> None:
        writer = csv.DictWriter(stream, fieldnames=columns, lineterminator="\n")
        writer.writeheader()
        writer.writerows(data)

    if filename in (None, "-"):
        write(sys.stdout)
        return True
    try:
        directory = os.path.dirname(filename)
        if directory:
            os.makedirs(directory, exist_ok=True)
        with open(filename, 'w', newline='', encoding='utf-8') as f:
            write(f)
        logger.info(f"Data exported to {filename}")
        return True
    except OSError as e:
        logger.error(f"Error exporting to CSV: {e}")
        return False


def geometric_grid(start: int, ratio: float = GRID_RATIO, count: int = 9) -> List[int]:
    """
    Integer grid start * ratio^k, k = 0..count-1, rounded and deduplicated.

    Args:
        start: First grid point (positive)
        ratio: Growth factor (> 1)
        count: Number of raw points

    Returns:
        List[int]: strictly increasing grid
    """
    if start < 1 or ratio <= 1 or count < 1:
        raise ValueError(f"invalid geometric grid: start={start}, ratio={ratio}, count={count}")
    grid: List[int] = []
    for k in range(count):
        point = int(round(start * ratio ** k))
        if not grid or point > grid[-1]:
            grid.append(point)
    return grid


def parse_grid(spec: str) -> List[int]:
    """
    Parse a grid description of the form geometric:START:RATIO:COUNT.

    Args:
        spec: Grid description

    Returns:
        List[int]: grid points
    """
    parts = spec.split(":")
    if len(parts) != 4 or parts[0] != "geometric":
        raise ValueError(f"grid must look like geometric:START:RATIO:COUNT, got {spec!r}")
    try:
        return geometric_grid(int(parts[1]), float(parts[2]), int(parts[3]))
    except ValueError as e:
        raise ValueError(f"bad grid {spec!r}: {e}") from e


def decade_span(points: Sequence[float]) -> float:
    """Number of decades between the smallest and largest point."""
    if not points or min(points) <= 0:
        return 0.0
    return math.log10(max(points) / min(points))


def format_fraction(value: Fraction) -> str:
    """Format a rational as 'p/q', or 'p' for integers."""
    value = Fraction(value)
    if value.denominator == 1:
        return str(value.numerator)
    return f"{value.numerator}/{value.denominator}"


def format_duration(seconds: float) -> str:
    """Human readable wall time."""
    if seconds < 1:
        return f"{seconds * 1000:.0f}ms"
    if seconds < 60:
        return f"{seconds:.2f}s"
    minutes, rest = divmod(seconds, 60)
    return f"{int(minutes)}m {rest:.0f}s"


def json_ready(value: Any) -> Any:
    """Convert rationals and complex numbers into JSON-friendly values."""
    if isinstance(value, Fraction):
        return format_fraction(value)
    if isinstance(value, complex):
        return [value.real, value.imag]
    return value
