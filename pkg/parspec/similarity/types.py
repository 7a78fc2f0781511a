"""Similarity parameters and the row-stored symmetric matrix."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, Iterator, List, Optional, Tuple

import numpy as np
from scipy import sparse

from parspec.errors import DomainError
from parspec.kvstore import RowKey, RowStore, SparseRow
from parspec.mapreduce import TimingReport


@dataclass(frozen=True)
class SimilarityParams:
    """Gaussian bandwidth and t-nearest-neighbour sparsification.

    ``sigma=None`` selects the sampled-median default and ``knn_t=None`` the
    ``ceil(log2 n) + 1`` default; ``dense=True`` keeps every entry.
    """

    sigma: Optional[float] = None
    knn_t: Optional[int] = None
    dense: bool = False
    seed: int = 0

    def __post_init__(self) -> None:
        if self.sigma is not None and not (np.isfinite(self.sigma) and self.sigma > 0):
            raise DomainError(f"sigma must be a positive finite number, got {self.sigma}")
        if self.knn_t is not None and self.knn_t < 1:
            raise DomainError(f"knn_t must be >= 1, got {self.knn_t}")
        if self.dense and self.knn_t is not None:
            raise DomainError("dense and knn_t are mutually exclusive")

    @property
    def sparsify_label(self) -> str:
        if self.dense:
            return "dense"
        return "auto" if self.knn_t is None else str(self.knn_t)


@dataclass
class SparseSymmetricMatrix:
    """``n x n`` symmetric matrix whose rows live in ``store`` under ``table``.

    Absent rows read as empty. ``reports`` carries the instrumentation of the
    jobs that built the matrix and ``metadata`` the diagonal and kernel policy.
    """

    n: int
    store: RowStore
    table: str = "S"
    reports: List[TimingReport] = field(default_factory=list)
    metadata: Dict[str, str] = field(default_factory=dict)
    pair_workloads: Dict[int, int] = field(default_factory=dict)

    def __post_init__(self) -> None:
        if self.n < 0:
            raise DomainError(f"matrix dimension must be >= 0, got {self.n}")

    def row(self, i: int) -> SparseRow:
        if not (0 <= i < self.n):
            raise DomainError(f"row {i} outside [0, {self.n})")
        stored = self.store.get_row(RowKey(self.table, i))
        return SparseRow.empty() if stored is None else stored

    def rows(self) -> Iterator[Tuple[int, SparseRow]]:
        for i in range(self.n):
            yield i, self.row(i)

    def get(self, i: int, j: int) -> float:
        return self.row(i).get(j)

    @property
    def nnz(self) -> int:
        return sum(row.nnz for _, row in self.store.scan(self.table, 0, self.n))

    def to_csr(self) -> sparse.csr_matrix:
        indptr = np.zeros(self.n + 1, dtype=np.int64)
        columns: List[np.ndarray] = []
        values: List[np.ndarray] = []
        for i, row in self.rows():
            indptr[i + 1] = indptr[i] + row.nnz
            columns.append(row.columns)
            values.append(row.values)
        indices = np.concatenate(columns) if columns else np.empty(0, dtype=np.int64)
        data = np.concatenate(values) if values else np.empty(0, dtype=np.float64)
        return sparse.csr_matrix((data, indices, indptr), shape=(self.n, self.n))

    def to_dense(self) -> np.ndarray:
        return self.store.read_dense(self.table, self.n, self.n)

    def is_symmetric(self) -> bool:
        """Exact symmetry of pattern and values."""
        matrix = self.to_csr()
        return (matrix != matrix.T).nnz == 0
