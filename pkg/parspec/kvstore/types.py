"""Row keys and immutable sparse rows."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, List, Mapping, Tuple, Union

import numpy as np

from parspec.errors import DomainError


@dataclass(frozen=True)
class RowKey:
    table: str
    row: int

    def __post_init__(self) -> None:
        if not self.table:
            raise DomainError("table name must be nonempty")
        if int(self.row) < 0:
            raise DomainError(f"row index must be >= 0, got {self.row}")
        object.__setattr__(self, "row", int(self.row))


@dataclass(frozen=True)
class SparseRow:
    """Sorted ``(column, value)`` entries backed by read-only numpy arrays.

    Columns are strictly increasing, values finite, and explicit zeros are
    never stored.
    """

    columns: np.ndarray
    values: np.ndarray

    def __post_init__(self) -> None:
        columns = np.array(self.columns, dtype=np.int64, copy=True).reshape(-1)
        values = np.array(self.values, dtype=np.float64, copy=True).reshape(-1)
        if columns.shape != values.shape:
            raise DomainError("columns and values must have the same length")
        if columns.size:
            if columns[0] < 0:
                raise DomainError("column indices must be >= 0")
            if np.any(np.diff(columns) <= 0):
                raise DomainError("columns must be strictly increasing")
            if not np.all(np.isfinite(values)):
                raise DomainError("row values must be finite")
            if np.any(values == 0.0):
                raise DomainError("explicit zeros are not stored")
        columns.setflags(write=False)
        values.setflags(write=False)
        object.__setattr__(self, "columns", columns)
        object.__setattr__(self, "values", values)

    @classmethod
    def empty(cls) -> "SparseRow":
        return cls(np.empty(0, dtype=np.int64), np.empty(0, dtype=np.float64))

    @classmethod
    def from_entries(cls, entries: Union[Iterable[Tuple[int, float]], Mapping[int, float]]) -> "SparseRow":
        """Build from unordered entries; zeros are dropped, duplicate columns rejected."""
        items = list(entries.items()) if isinstance(entries, Mapping) else list(entries)
        items = sorted((int(c), float(v)) for c, v in items if float(v) != 0.0)
        if not items:
            return cls.empty()
        columns, values = zip(*items)
        return cls(np.asarray(columns, dtype=np.int64), np.asarray(values, dtype=np.float64))

    @classmethod
    def from_dense(cls, vector: np.ndarray) -> "SparseRow":
        vector = np.asarray(vector, dtype=np.float64).reshape(-1)
        columns = np.flatnonzero(vector)
        return cls(columns, vector[columns])

    def entries(self) -> List[Tuple[int, float]]:
        return [(int(c), float(v)) for c, v in zip(self.columns, self.values)]

    def get(self, column: int, default: float = 0.0) -> float:
        position = int(np.searchsorted(self.columns, column))
        if position < self.columns.size and self.columns[position] == column:
            return float(self.values[position])
        return default

    def to_dense(self, width: int) -> np.ndarray:
        dense = np.zeros(width, dtype=np.float64)
        dense[self.columns] = self.values
        return dense

    @property
    def nnz(self) -> int:
        return int(self.columns.size)

    def __len__(self) -> int:
        return self.nnz

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, SparseRow):
            return NotImplemented
        return bool(
            np.array_equal(self.columns, other.columns) and np.array_equal(self.values, other.values)
        )

    __hash__ = None  # type: ignore[assignment]
