"""Clustering agreement."""

from __future__ import annotations

from typing import Sequence

import numpy as np
from scipy import sparse

from parspec.errors import DomainError


def _pairs(counts: np.ndarray) -> float:
    counts = counts.astype(np.float64)
    return float(np.sum(counts * (counts - 1.0) / 2.0))


def ari(labels_a: Sequence[int], labels_b: Sequence[int]) -> float:
    """Adjusted Rand Index from the pair-counting contingency table.

    Two labellings whose expected and maximum index coincide (for example a
    single cluster on both sides, or fewer than two points) score 1.0.
    """
    a = np.asarray(labels_a)
    b = np.asarray(labels_b)
    if a.shape != b.shape or a.ndim != 1:
        raise DomainError(f"label sequences differ in length: {a.size} vs {b.size}")
    n = a.size
    if n < 2:
        return 1.0
    _, rows = np.unique(a, return_inverse=True)
    _, cols = np.unique(b, return_inverse=True)
    table = sparse.coo_matrix(
        (np.ones(n, dtype=np.int64), (rows.reshape(-1), cols.reshape(-1)))
    ).tocsr()
    table.sum_duplicates()

    index = _pairs(table.data)
    row_pairs = _pairs(np.asarray(table.sum(axis=1)).reshape(-1))
    col_pairs = _pairs(np.asarray(table.sum(axis=0)).reshape(-1))
    total = n * (n - 1) / 2.0
    expected = row_pairs * col_pairs / total if total else 0.0
    maximum = (row_pairs + col_pairs) / 2.0
    denominator = maximum - expected
    if denominator == 0.0:
        return 1.0
    return float((index - expected) / denominator)
