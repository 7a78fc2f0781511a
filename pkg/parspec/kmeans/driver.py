"""Map/reduce K-means over the embedded rows with a shared centers table."""

from __future__ import annotations

import time
from collections import Counter
from typing import Any, Iterable, List, Optional, Tuple, Union

import numpy as np

from parspec.constants import KMEANS_BLOCK_SIZE, KMEANS_EPS, KMEANS_MAX_ITER, KMEANS_TASKS_PER_WORKER
from parspec.dataio import ClusterAssignment
from parspec.eigensolver import SpectralEmbedding
from parspec.errors import DomainError
from parspec.kmeans.ops import (
    CENTERS_TABLE,
    assign_block,
    block_bounds,
    block_stats,
    farthest_points,
    read_centers,
    reseed_empty,
    update_reduce,
    wcss,
    write_centers,
)
from parspec.kmeans.seeding import InitSpec, initial_centers
from parspec.kmeans.types import Centroids, KMeansResult
from parspec.kvstore import RowKey, RowStore, SparseRow
from parspec.mapreduce import MapReduceEngine, TimingReport, engine_scope
from parspec.utils.logger import StageLogger

log = StageLogger("KMeans")

KMEANS_COUNTERS = ("distance_computations", "points_assigned", "centers_updated")


def embedding_rows(data: Union[SpectralEmbedding, np.ndarray]) -> np.ndarray:
    rows = data.Y if isinstance(data, SpectralEmbedding) else np.asarray(data, dtype=np.float64)
    if rows.ndim != 2 or rows.shape[1] < 1:
        raise DomainError(f"expected an n x d array of points, got shape {rows.shape}")
    if not np.all(np.isfinite(rows)):
        raise DomainError("points contain non-finite values")
    return rows


def kmeans(
    data: Union[SpectralEmbedding, np.ndarray],
    k: int,
    max_iter: int = KMEANS_MAX_ITER,
    eps: float = KMEANS_EPS,
    m: int = 1,
    seed: int = 0,
    *,
    init: InitSpec = "kmeans++",
    store: Optional[RowStore] = None,
    engine: Optional[MapReduceEngine] = None,
    table: str = CENTERS_TABLE,
) -> KMeansResult:
    """Lloyd iterations as one map/reduce job per iteration.

    The map phase assigns each fixed-size point block against the centers
    read from ``table`` and emits per-cluster partial sums; the reduce phase
    merges them per cluster and writes the new center row. Empty clusters are
    re-seeded by the driver after the reduce barrier. Stops once no center
    moves by ``eps`` or more, or after ``max_iter`` iterations.
    """
    points = embedding_rows(data)
    n, dimension = points.shape
    if k < 1:
        raise DomainError(f"k must be >= 1, got {k}")
    if n < k:
        raise DomainError(f"cannot form {k} clusters from {n} points")
    if max_iter < 1:
        raise DomainError(f"max_iter must be >= 1, got {max_iter}")
    if not eps > 0:
        raise DomainError(f"eps must be > 0, got {eps}")

    store = store if store is not None else RowStore()
    started = time.perf_counter()
    store.drop_table(table)
    write_centers(store, Centroids(initial_centers(points, k, init, seed), iteration=0), table)
    blocks = block_bounds(n, KMEANS_BLOCK_SIZE)

    reports: List[TimingReport] = []
    history: List[float] = []
    labels = np.zeros(n, dtype=np.int64)
    reseeded = 0
    converged = False
    iteration = 0

    with engine_scope(m, engine) as active:
        worker_count = active.worker_count
        for iteration in range(1, max_iter + 1):
            centers = read_centers(store, k, dimension, table).centers

            def map_fn(block: int, counters: Counter) -> Iterable[Tuple[Any, Any]]:
                lo, hi = blocks[block]
                chunk = points[lo:hi]
                block_labels, distances = assign_block(chunk, centers)
                counters["distance_computations"] += (hi - lo) * k
                counters["points_assigned"] += hi - lo
                emissions: List[Tuple[Any, Any]] = [
                    (("stats", cluster), stats) for cluster, stats in block_stats(chunk, block_labels, k)
                ]
                emissions.append((("labels", block), block_labels))
                emissions.append((("farthest", block), farthest_points(distances, lo, k)))
                return emissions

            def reduce_fn(key: Tuple[str, int], values: List[Any], counters: Counter) -> Any:
                kind, index = key
                if kind == "stats":
                    counters["centers_updated"] += 1
                    return update_reduce(index, values, store, table)
                return values[0]

            job = active.job(
                f"kmeans.iteration.{iteration}",
                list(range(len(blocks))),
                map_fn,
                reduce_fn,
                tasks_per_worker=KMEANS_TASKS_PER_WORKER,
                counter_names=KMEANS_COUNTERS,
            )
            result = active.run_job(job)
            reports.append(result.report)

            for block, (lo, hi) in enumerate(blocks):
                labels[lo:hi] = result.output[("labels", block)]
            updated = read_centers(store, k, dimension, table).centers
            empty = [c for c in range(k) if ("stats", c) not in result.output]
            if empty:
                candidates = [
                    pair for block in range(len(blocks)) for pair in result.output[("farthest", block)]
                ]
                updated = reseed_empty(updated, empty, candidates, points)
                for cluster in empty:
                    store.put_row(RowKey(table, cluster), SparseRow.from_dense(updated[cluster]))
                reseeded += len(empty)
                log.warning("iteration %d: re-seeded empty clusters %s", iteration, empty)
            store.set_meta(table, "iteration", iteration)

            history.append(wcss(points, labels, updated))
            displacement = float(np.max(np.linalg.norm(updated - centers, axis=1)))
            log.debug(
                "iteration %d: wcss=%.12g displacement=%.3e", iteration, history[-1], displacement
            )
            if displacement < eps:
                converged = True
                break

    final = read_centers(store, k, dimension, table)
    metadata = {
        "block_size": str(KMEANS_BLOCK_SIZE),
        "tasks_per_worker": str(KMEANS_TASKS_PER_WORKER),
        "iterations": str(iteration),
        "converged": str(converged).lower(),
    }
    report = TimingReport.combine(
        "kmeans", worker_count, reports, time.perf_counter() - started, metadata
    )
    report.op_counters["empty_clusters_reseeded"] = reseeded
    log.info(
        "k=%d: %s after %d iterations, wcss=%.6g",
        k,
        "converged" if converged else "stopped",
        iteration,
        history[-1],
    )
    return KMeansResult(
        assignment=ClusterAssignment.from_labels(labels.tolist(), k),
        centroids=final,
        iterations=iteration,
        converged=converged,
        wcss_history=tuple(history),
        reseeded=reseeded,
        report=report,
    )

