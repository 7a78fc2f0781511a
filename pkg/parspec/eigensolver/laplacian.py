"""Degree vector and the matrix-free normalized Laplacian."""

from __future__ import annotations

import threading
import time
from collections import Counter
from typing import Iterable, List, Optional, Tuple

import numpy as np
from scipy import sparse

from parspec.constants import MATVEC_TASKS_PER_WORKER
from parspec.eigensolver.types import DegreeVector
from parspec.errors import DomainError, SingularityError
from parspec.mapreduce import MapReduceEngine, TimingReport, engine_scope, partition
from parspec.similarity import SparseSymmetricMatrix

MATVEC_COUNTER = "matvec_row_products"


def degree_vector(similarity: SparseSymmetricMatrix) -> DegreeVector:
    """Row sums over the stored entries of ``similarity``."""
    d = np.zeros(similarity.n, dtype=np.float64)
    for i, row in similarity.rows():
        d[i] = float(np.sum(row.values)) if row.nnz else 0.0
    return DegreeVector(d)


class NormalizedLaplacian:
    """``L_sym = I - D^-1/2 S D^-1/2`` applied without assembling it.

    Rows of ``S`` are gathered from the store once and split into contiguous
    row blocks, one map key per block. Each output row depends only on its own
    stored row, so results are identical for every worker count.
    """

    def __init__(
        self,
        similarity: SparseSymmetricMatrix,
        degrees: Optional[DegreeVector] = None,
        m: int = 1,
        engine: Optional[MapReduceEngine] = None,
    ) -> None:
        self.similarity = similarity
        self.degrees = degrees if degrees is not None else degree_vector(similarity)
        if self.degrees.n != similarity.n:
            raise DomainError(
                f"degree vector has {self.degrees.n} entries, matrix has {similarity.n} rows"
            )
        isolated = self.degrees.first_isolated()
        if isolated is not None:
            raise SingularityError(isolated)
        self.engine = engine
        self.worker_count = engine.worker_count if engine is not None else m
        if self.worker_count < 1:
            raise DomainError(f"worker count must be >= 1, got {self.worker_count}")
        self.n = similarity.n
        self.inv_sqrt_degree = 1.0 / np.sqrt(self.degrees.d)
        self._matrix = similarity.to_csr()
        self._blocks = self._split_blocks()
        self.counters: Counter = Counter()
        self.apply_seconds = 0.0
        self._lock = threading.Lock()

    def _split_blocks(self) -> List[Tuple[int, int, sparse.csr_matrix]]:
        blocks = []
        for rows in partition(range(self.n), self.worker_count, MATVEC_TASKS_PER_WORKER):
            if not rows:
                continue
            lo, hi = rows[0], rows[-1] + 1
            blocks.append((lo, hi, self._matrix[lo:hi]))
        return blocks

    @property
    def block_count(self) -> int:
        return len(self._blocks)

    def with_workers(self, m: int, engine: Optional[MapReduceEngine] = None) -> "NormalizedLaplacian":
        return NormalizedLaplacian(self.similarity, self.degrees, m, engine)

    def apply(self, v: np.ndarray, counter: str = MATVEC_COUNTER) -> np.ndarray:
        """``L_sym v`` as a map job over row blocks; adds ``n`` to ``counter``."""
        vector = np.asarray(v, dtype=np.float64).reshape(-1)
        if vector.size != self.n:
            raise DomainError(f"vector has {vector.size} entries, operator has dimension {self.n}")
        if not np.all(np.isfinite(vector)):
            raise DomainError("vector contains non-finite values")
        scaled = self.inv_sqrt_degree * vector
        blocks = self._blocks
        inv_sqrt = self.inv_sqrt_degree

        def map_fn(block: int, counters: Counter) -> Iterable[Tuple[int, np.ndarray]]:
            lo, hi, rows = blocks[block]
            counters[counter] += hi - lo
            return [(block, vector[lo:hi] - inv_sqrt[lo:hi] * (rows @ scaled))]

        started = time.perf_counter()
        with engine_scope(self.worker_count, self.engine) as active:
            job = active.job(
                "laplacian.apply",
                list(range(len(blocks))),
                map_fn,
                tasks_per_worker=MATVEC_TASKS_PER_WORKER,
                counter_names=(counter,),
                read_only_tables=(self.similarity.table,),
            )
            result = active.run_job(job)
        out = np.empty(self.n, dtype=np.float64)
        for block, (lo, hi, _) in enumerate(blocks):
            out[lo:hi] = result.output[block][0]
        with self._lock:
            self.counters.update(result.report.op_counters)
            self.counters["operator_applications"] += 1
            self.apply_seconds += time.perf_counter() - started
        return out

    __call__ = apply

    def report(self, stage: str = "laplacian") -> TimingReport:
        return TimingReport(
            stage=stage,
            worker_count=self.worker_count,
            wall_seconds=self.apply_seconds,
            op_counters={name: int(value) for name, value in sorted(self.counters.items())},
            metadata={"tasks_per_worker": str(MATVEC_TASKS_PER_WORKER)},
        )

    def to_dense(self) -> np.ndarray:
        scale = sparse.diags(self.inv_sqrt_degree)
        return np.eye(self.n) - (scale @ self._matrix @ scale).toarray()


def laplacian_apply(
    laplacian: NormalizedLaplacian, v: np.ndarray, m: Optional[int] = None
) -> np.ndarray:
    """``v - D^-1/2 S D^-1/2 v`` computed row-parallel on ``m`` workers."""
    if m is not None and m != laplacian.worker_count:
        laplacian = laplacian.with_workers(m)
    return laplacian.apply(v)
