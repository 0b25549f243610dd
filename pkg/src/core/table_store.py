"""Binary persistence of class-number tables for Hurwitz Correlations"""
import hashlib
import os
import struct

import numpy as np

from ..config import get_config_dict
from ..utils.logger import logger
from .class_numbers import ClassNumberTable
from .exceptions import (
    CorruptHeaderError,
    TableFormatError,
    TruncatedPayloadError,
    VersionMismatchError,
)

config = get_config_dict()
TABLE_MAGIC = config["TABLE_MAGIC"]
TABLE_VERSION = config["TABLE_VERSION"]
TABLE_HEADER_FORMAT = config["TABLE_HEADER_FORMAT"]
CHECKSUM_CHUNK_BYTES = config["CHECKSUM_CHUNK_BYTES"]
HEADER_SIZE = struct.calcsize(TABLE_HEADER_FORMAT)
CELL_DTYPE = np.dtype("<u4")


def table_checksum(path: str) -> str:
    """
    SHA-256 of a table file, read in chunks.

    Args:
        path: Path to the table file

    Returns:
        str: Hex digest
    """
    digest = hashlib.sha256()
    with open(path, "rb") as f:
        for chunk in iter(lambda: f.read(CHECKSUM_CHUNK_BYTES), b""):
            digest.update(chunk)
    return digest.hexdigest()


def save_table(table: ClassNumberTable, path: str) -> str:
    """
    Write a table as header plus little-endian uint32 cells for n = 1..limit.

    Args:
        table: Table to persist
        path: Destination file

    Returns:
        str: SHA-256 of the written file
    """
    directory = os.path.dirname(path)
    if directory:
        os.makedirs(directory, exist_ok=True)

    header = struct.pack(TABLE_HEADER_FORMAT, TABLE_MAGIC, TABLE_VERSION, table.limit)
    with open(path, "wb") as f:
        f.write(header)
        f.write(table.cells[1:].astype(CELL_DTYPE, copy=False).tobytes())

    checksum = table_checksum(path)
    logger.info(f"Saved table to {path} (limit {table.limit}, sha256 {checksum[:12]})")
    return checksum


def load_table(path: str) -> ClassNumberTable:
    """
    Read a table written by save_table.

    Args:
        path: Table file

    Returns:
        ClassNumberTable: bit-identical copy of the saved table

    Raises:
        CorruptHeaderError: short header or wrong magic
        VersionMismatchError: unknown format version
        TruncatedPayloadError: fewer than 4*limit payload bytes
        TableFormatError: bytes after the payload
    """
    with open(path, "rb") as f:
        header = f.read(HEADER_SIZE)
        if len(header) < HEADER_SIZE:
            raise CorruptHeaderError(f"{path}: header is {len(header)} bytes, expected {HEADER_SIZE}")
        magic, version, limit = struct.unpack(TABLE_HEADER_FORMAT, header)
        if magic != TABLE_MAGIC:
            raise CorruptHeaderError(f"{path}: bad magic {magic!r}, expected {TABLE_MAGIC!r}")
        if version != TABLE_VERSION:
            raise VersionMismatchError(f"{path}: format version {version}, expected {TABLE_VERSION}")

        expected = limit * CELL_DTYPE.itemsize
        available = os.fstat(f.fileno()).st_size - HEADER_SIZE
        if available < expected:
            raise TruncatedPayloadError(
                f"{path}: payload is {available} bytes, expected {expected} for limit {limit}")
        payload = f.read(expected)
        if f.read(1):
            raise TableFormatError(f"{path}: trailing bytes after {limit} cells")

    cells = np.empty(limit + 1, dtype=np.uint32)
    cells[0] = 0
    cells[1:] = np.frombuffer(payload, dtype=CELL_DTYPE)
    logger.info(f"Loaded table from {path} (limit {limit})")
    return ClassNumberTable(cells)
