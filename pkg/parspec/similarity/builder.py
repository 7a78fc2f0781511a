"""Parallel construction of the similarity matrix on the map/reduce engine.

Point mode runs three jobs:

1. ``similarity.kernel`` (map-only, keyed by pairing index) computes the
   upper-triangle segment of both paired rows and stores it in a staging
   table.
2. ``similarity.mirror`` writes full rows after the driver transposes the
   staged segments; values are copied, never recomputed.
3. ``similarity.sparsify`` keeps the t largest off-diagonal entries per row
   and re-symmetrises by union (skipped in dense mode).
"""

from __future__ import annotations

import time
from collections import Counter
from typing import Iterable, List, Optional, Tuple

import numpy as np
from scipy import sparse
from scipy.sparse import csgraph

from parspec.constants import MATVEC_TASKS_PER_WORKER, SIMILARITY_TASKS_PER_WORKER
from parspec.dataio import Graph, PointSet
from parspec.errors import DomainError, NumericalError
from parspec.kvstore import RowKey, RowStore, SparseRow
from parspec.mapreduce import MapReduceEngine, TimingReport, engine_scope
from parspec.similarity.kernel import (
    default_knn_t,
    default_sigma,
    gaussian_row_segment,
    paired_rows,
    pairing_keys,
)
from parspec.similarity.types import SimilarityParams, SparseSymmetricMatrix
from parspec.utils.logger import StageLogger

log = StageLogger("Similarity")

UPPER_TABLE = "S_upper"
FULL_TABLE = "S_full"


def _upper_csr(store: RowStore, n: int) -> sparse.csr_matrix:
    indptr = np.zeros(n + 1, dtype=np.int64)
    columns: List[np.ndarray] = []
    values: List[np.ndarray] = []
    for row in range(n):
        stored = store.get_row(RowKey(UPPER_TABLE, row))
        if stored is None:
            raise NumericalError(f"upper segment of row {row} was never written")
        indptr[row + 1] = indptr[row] + stored.nnz
        columns.append(stored.columns)
        values.append(stored.values)
    indices = np.concatenate(columns) if columns else np.empty(0, dtype=np.int64)
    data = np.concatenate(values) if values else np.empty(0, dtype=np.float64)
    return sparse.csr_matrix((data, indices, indptr), shape=(n, n))


def _mirror(upper: sparse.csr_matrix) -> sparse.csr_matrix:
    """``U + strict_upper(U)^T``; patterns are disjoint so every value is copied exactly."""
    full = (upper + sparse.triu(upper, k=1, format="csr").T).tocsr()
    full.sort_indices()
    return full


def _write_rows(
    engine: MapReduceEngine,
    store: RowStore,
    table: str,
    matrix: sparse.csr_matrix,
    name: str,
) -> TimingReport:
    """Row-parallel job storing every row of ``matrix`` under ``(table, row)``."""
    indptr, indices, data = matrix.indptr, matrix.indices, matrix.data

    def map_fn(row: int, counters: Counter) -> Iterable[Tuple[int, int]]:
        start, stop = indptr[row], indptr[row + 1]
        store.put_row(RowKey(table, row), SparseRow(indices[start:stop], data[start:stop]))
        counters["rows_written"] += 1
        return ()

    job = engine.job(
        name,
        list(range(matrix.shape[0])),
        map_fn,
        tasks_per_worker=MATVEC_TASKS_PER_WORKER,
        counter_names=("rows_written",),
    )
    return engine.run_job(job).report


def _sparsify(
    engine: MapReduceEngine, store: RowStore, n: int, t: int, table: str
) -> TimingReport:
    """Keep each row's ``t`` largest off-diagonal entries, then union with the transpose."""

    def map_fn(row: int, counters: Counter) -> Iterable[Tuple[int, int]]:
        stored = store.get_row(RowKey(FULL_TABLE, row)) or SparseRow.empty()
        off_diagonal = stored.columns != row
        columns = stored.columns[off_diagonal]
        values = stored.values[off_diagonal]
        # largest value first, ties to the lower column
        order = np.lexsort((columns, -values))[:t]
        kept = np.sort(columns[order])
        counters["neighbour_candidates"] += int(columns.size)
        emissions: List[Tuple[int, int]] = [(row, row)]
        for column in kept.tolist():
            emissions.append((row, column))
            emissions.append((column, row))
        return emissions

    def reduce_fn(row: int, neighbours: List[int], counters: Counter) -> int:
        stored = store.get_row(RowKey(FULL_TABLE, row)) or SparseRow.empty()
        keep = np.isin(stored.columns, np.unique(np.asarray(neighbours, dtype=np.int64)))
        store.put_row(RowKey(table, row), SparseRow(stored.columns[keep], stored.values[keep]))
        retained = int(np.count_nonzero(keep))
        counters["retained_entries"] += retained
        return retained

    job = engine.job(
        "similarity.sparsify",
        list(range(n)),
        map_fn,
        reduce_fn,
        tasks_per_worker=SIMILARITY_TASKS_PER_WORKER,
        counter_names=("neighbour_candidates", "retained_entries"),
        read_only_tables=(FULL_TABLE,),
    )
    return engine.run_job(job).report


def _check_symmetric(matrix: SparseSymmetricMatrix) -> None:
    if not matrix.is_symmetric():
        raise NumericalError(f"table {matrix.table!r} is not exactly symmetric")


def build_similarity(
    points: PointSet,
    params: Optional[SimilarityParams] = None,
    m: int = 1,
    *,
    store: Optional[RowStore] = None,
    engine: Optional[MapReduceEngine] = None,
    table: str = "S",
) -> SparseSymmetricMatrix:
    """Gaussian similarity of ``points`` stored row-wise in ``table``.

    Each unordered pair is evaluated once, so the ``kernel_evaluations``
    counter is exactly ``n(n+1)/2`` whatever the worker count. The diagonal is
    stored as 1.
    """
    params = params or SimilarityParams()
    store = store if store is not None else RowStore()
    n = points.n
    if n < 1:
        raise DomainError("similarity needs at least one point")

    sigma = params.sigma if params.sigma is not None else default_sigma(points, params.seed)
    knn_t = None if params.dense else (params.knn_t or default_knn_t(n))
    coordinates = points.points
    started = time.perf_counter()

    with engine_scope(m, engine) as active:
        store.drop_table(UPPER_TABLE)

        def kernel_map(key: int, counters: Counter) -> Iterable[Tuple[int, int]]:
            emissions = []
            workload = 0
            for row in paired_rows(key, n):
                segment = gaussian_row_segment(coordinates, row, sigma)
                workload += segment.size
                columns = np.arange(row, n, dtype=np.int64)
                nonzero = segment != 0.0
                store.put_row(RowKey(UPPER_TABLE, row), SparseRow(columns[nonzero], segment[nonzero]))
            counters["kernel_evaluations"] += workload
            emissions.append((key, workload))
            return emissions

        kernel_job = active.job(
            "similarity.kernel",
            list(pairing_keys(n)),
            kernel_map,
            tasks_per_worker=SIMILARITY_TASKS_PER_WORKER,
            counter_names=("kernel_evaluations",),
        )
        kernel = active.run_job(kernel_job)
        workloads = {int(key): int(values[0]) for key, values in kernel.output.items()}

        full = _mirror(_upper_csr(store, n))
        store.drop_table(UPPER_TABLE)
        reports = [kernel.report]
        if knn_t is None:
            store.drop_table(table)
            reports.append(_write_rows(active, store, table, full, "similarity.mirror"))
        else:
            store.drop_table(FULL_TABLE)
            store.drop_table(table)
            reports.append(_write_rows(active, store, FULL_TABLE, full, "similarity.mirror"))
            reports.append(_sparsify(active, store, n, knn_t, table))
            store.drop_table(FULL_TABLE)
        worker_count = active.worker_count

    metadata = {
        "mode": "point",
        "diagonal": "1",
        "sigma": repr(float(sigma)),
        "knn_t": "dense" if knn_t is None else str(knn_t),
        "tasks_per_worker": str(SIMILARITY_TASKS_PER_WORKER),
    }
    report = TimingReport.combine(
        "similarity", worker_count, reports, time.perf_counter() - started, metadata
    )
    matrix = SparseSymmetricMatrix(
        n=n,
        store=store,
        table=table,
        reports=[report],
        metadata=metadata,
        pair_workloads=workloads,
    )
    _check_symmetric(matrix)
    log.info(
        "n=%d sigma=%.6g t=%s: %d kernel evaluations, %d stored entries in %.3fs",
        n,
        sigma,
        metadata["knn_t"],
        report.counter("kernel_evaluations"),
        matrix.nnz,
        report.wall_seconds,
    )
    return matrix


def graph_similarity(
    graph: Graph,
    m: int = 1,
    *,
    store: Optional[RowStore] = None,
    engine: Optional[MapReduceEngine] = None,
    table: str = "S",
) -> SparseSymmetricMatrix:
    """Edge weights as similarities, zero diagonal."""
    store = store if store is not None else RowStore()
    n = graph.vertex_count
    started = time.perf_counter()
    rows = np.fromiter((edge.src for edge in graph.edges), dtype=np.int64, count=graph.edge_count)
    cols = np.fromiter((edge.dst for edge in graph.edges), dtype=np.int64, count=graph.edge_count)
    weights = np.fromiter(
        (edge.weight for edge in graph.edges), dtype=np.float64, count=graph.edge_count
    )
    keep = weights != 0.0
    upper = sparse.csr_matrix((weights[keep], (rows[keep], cols[keep])), shape=(n, n))
    full = _mirror(upper)

    with engine_scope(m, engine) as active:
        store.drop_table(table)
        write_report = _write_rows(active, store, table, full, "similarity.graph")
        worker_count = active.worker_count

    metadata = {"mode": "graph", "diagonal": "0", "knn_t": "dense"}
    report = TimingReport.combine(
        "similarity", worker_count, [write_report], time.perf_counter() - started, metadata
    )
    matrix = SparseSymmetricMatrix(n=n, store=store, table=table, reports=[report], metadata=metadata)
    _check_symmetric(matrix)
    log.info("graph mode: %d vertices, %d edges", n, graph.edge_count)
    return matrix


def connected_components(matrix: SparseSymmetricMatrix) -> Tuple[int, np.ndarray]:
    """Component count and per-vertex component labels of the stored pattern."""
    if matrix.n == 0:
        return 0, np.empty(0, dtype=np.int32)
    count, labels = csgraph.connected_components(matrix.to_csr(), directed=False)
    return int(count), labels
