"""Binary table snapshots.

Layout (all integers 64-bit little-endian, values IEEE-754 double LE)::

    name_length, name (utf-8 bytes), row_count,
    then per row: row_index, entry_count, entry_count x (column, value)
"""

from __future__ import annotations

from pathlib import Path
from typing import BinaryIO, Union

import numpy as np

from parspec.errors import ParseError
from parspec.kvstore.store import RowStore
from parspec.kvstore.types import RowKey, SparseRow

_INT = np.dtype("<i8")
_ENTRY = np.dtype([("column", "<i8"), ("value", "<f8")])


def _write_ints(handle: BinaryIO, *values: int) -> None:
    handle.write(np.asarray(values, dtype=_INT).tobytes())


def _read_ints(handle: BinaryIO, count: int) -> np.ndarray:
    raw = handle.read(_INT.itemsize * count)
    if len(raw) != _INT.itemsize * count:
        raise ParseError("truncated snapshot")
    return np.frombuffer(raw, dtype=_INT)


def save_snapshot(store: RowStore, table: str, path: Union[str, Path]) -> int:
    """Write ``table`` in row order; returns the number of rows written."""
    rows = store.scan(table)
    name = table.encode("utf-8")
    with open(path, "wb") as handle:
        _write_ints(handle, len(name))
        handle.write(name)
        _write_ints(handle, len(rows))
        for key, row in rows:
            _write_ints(handle, key.row, row.nnz)
            entries = np.empty(row.nnz, dtype=_ENTRY)
            entries["column"] = row.columns
            entries["value"] = row.values
            handle.write(entries.tobytes())
    return len(rows)


def load_snapshot(store: RowStore, path: Union[str, Path]) -> str:
    """Load a snapshot into ``store`` (replacing existing rows); returns the table name."""
    with open(path, "rb") as handle:
        (name_length,) = _read_ints(handle, 1)
        name = handle.read(int(name_length)).decode("utf-8")
        (row_count,) = _read_ints(handle, 1)
        for _ in range(int(row_count)):
            row_index, entry_count = (int(v) for v in _read_ints(handle, 2))
            raw = handle.read(_ENTRY.itemsize * entry_count)
            if len(raw) != _ENTRY.itemsize * entry_count:
                raise ParseError(f"truncated snapshot at row {row_index}")
            entries = np.frombuffer(raw, dtype=_ENTRY)
            store.put_row(RowKey(name, row_index), SparseRow(entries["column"], entries["value"]))
    return name
