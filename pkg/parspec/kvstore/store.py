"""In-memory row-keyed table store shared by all workers."""

from __future__ import annotations

import threading
from typing import Any, Dict, List, Optional, Tuple

import numpy as np

from parspec.errors import DomainError
from parspec.kvstore.types import RowKey, SparseRow

LOCK_STRIPES = 64


class _Table:
    """One table: rows are replaced atomically; writers to the same row serialise on a stripe."""

    def __init__(self, name: str) -> None:
        self.name = name
        self.rows: Dict[int, SparseRow] = {}
        self.meta: Dict[str, Any] = {}
        self._stripes = [threading.Lock() for _ in range(LOCK_STRIPES)]

    def lock_for(self, row: int) -> threading.Lock:
        return self._stripes[row % LOCK_STRIPES]


class RowStore:
    """Embedded stand-in for a distributed sparse table database.

    Stored rows are immutable, so readers never take a lock and never see a
    partially written row. Writes to distinct rows proceed in parallel; writes
    to one row serialise with last-writer-wins.
    """

    def __init__(self) -> None:
        self._tables: Dict[str, _Table] = {}
        self._tables_lock = threading.Lock()

    def _table(self, name: str) -> _Table:
        table = self._tables.get(name)
        if table is None:
            with self._tables_lock:
                table = self._tables.get(name)
                if table is None:
                    table = _Table(name)
                    self._tables[name] = table
        return table

    def put_row(self, key: RowKey, row: SparseRow) -> None:
        """Replace the whole row stored under ``key``."""
        if not isinstance(row, SparseRow):
            raise DomainError(f"expected SparseRow, got {type(row).__name__}")
        table = self._table(key.table)
        with table.lock_for(key.row):
            table.rows[key.row] = row

    def get_row(self, key: RowKey) -> Optional[SparseRow]:
        """The last written row, or ``None`` when the key is absent."""
        table = self._tables.get(key.table)
        if table is None:
            return None
        return table.rows.get(key.row)

    def scan(self, table: str, lo: int = 0, hi: Optional[int] = None) -> List[Tuple[RowKey, SparseRow]]:
        """Rows with ``lo <= row < hi`` in ascending row order."""
        if hi is not None and lo > hi:
            raise DomainError(f"scan range [{lo}, {hi}) is inverted")
        stored = self._tables.get(table)
        if stored is None:
            return []
        snapshot = dict(stored.rows)
        selected = sorted(r for r in snapshot if r >= lo and (hi is None or r < hi))
        return [(RowKey(table, r), snapshot[r]) for r in selected]

    def row_count(self, table: str) -> int:
        stored = self._tables.get(table)
        return 0 if stored is None else len(stored.rows)

    def tables(self) -> List[str]:
        return sorted(self._tables)

    def has_table(self, table: str) -> bool:
        return table in self._tables

    def drop_table(self, table: str) -> bool:
        with self._tables_lock:
            return self._tables.pop(table, None) is not None

    def set_meta(self, table: str, name: str, value: Any) -> None:
        stored = self._table(table)
        with self._tables_lock:
            stored.meta[name] = value

    def get_meta(self, table: str, name: str, default: Any = None) -> Any:
        stored = self._tables.get(table)
        if stored is None:
            return default
        return stored.meta.get(name, default)

    def put_dense_rows(self, table: str, matrix: np.ndarray) -> None:
        """Store each row of a dense 2-D array under ``(table, row_index)``."""
        for index, vector in enumerate(np.asarray(matrix, dtype=np.float64)):
            self.put_row(RowKey(table, index), SparseRow.from_dense(vector))

    def read_dense(self, table: str, rows: int, width: int) -> np.ndarray:
        """Dense ``rows x width`` view of a table; absent rows read as zeros."""
        dense = np.zeros((rows, width), dtype=np.float64)
        for key, row in self.scan(table, 0, rows):
            dense[key.row, row.columns] = row.values
        return dense
