"""Embedded row-keyed table store."""

from parspec.kvstore.snapshot import load_snapshot, save_snapshot
from parspec.kvstore.store import RowStore
from parspec.kvstore.types import RowKey, SparseRow

__all__ = [
    "RowKey",
    "RowStore",
    "SparseRow",
    "load_snapshot",
    "save_snapshot",
]
