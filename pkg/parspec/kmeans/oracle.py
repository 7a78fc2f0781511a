"""Single-threaded Lloyd iteration used as the reference for the map/reduce version."""

from __future__ import annotations

from typing import Dict, List, Tuple, Union

import numpy as np

from parspec.constants import KMEANS_BLOCK_SIZE, KMEANS_EPS, KMEANS_MAX_ITER
from parspec.dataio import ClusterAssignment
from parspec.eigensolver import SpectralEmbedding
from parspec.errors import DomainError
from parspec.kmeans.driver import embedding_rows
from parspec.kmeans.ops import assign_block, block_bounds, block_stats, farthest_points, reseed_empty, wcss
from parspec.kmeans.seeding import InitSpec, initial_centers
from parspec.kmeans.types import Centroids, ClusterStats, KMeansResult


def kmeans_oracle(
    data: Union[SpectralEmbedding, np.ndarray],
    k: int,
    init: InitSpec = "first-k",
    max_iter: int = KMEANS_MAX_ITER,
    eps: float = KMEANS_EPS,
    seed: int = 0,
) -> KMeansResult:
    points = embedding_rows(data)
    n = points.shape[0]
    if not (1 <= k <= n):
        raise DomainError(f"cannot form {k} clusters from {n} points")
    centers = initial_centers(points, k, init, seed)
    labels = np.zeros(n, dtype=np.int64)
    history: List[float] = []
    reseeded = 0
    converged = False
    iteration = 0

    for iteration in range(1, max_iter + 1):
        partials: Dict[int, List[ClusterStats]] = {}
        candidates: List[Tuple[float, int]] = []
        for lo, hi in block_bounds(n, KMEANS_BLOCK_SIZE):
            chunk = points[lo:hi]
            block_labels, distances = assign_block(chunk, centers)
            labels[lo:hi] = block_labels
            for cluster, stats in block_stats(chunk, block_labels, k):
                partials.setdefault(cluster, []).append(stats)
            candidates.extend(farthest_points(distances, lo, k))

        updated = centers.copy()
        for cluster, parts in partials.items():
            updated[cluster] = ClusterStats.combine(parts).mean()
        empty = [c for c in range(k) if c not in partials]
        if empty:
            updated = reseed_empty(updated, empty, candidates, points)
            reseeded += len(empty)

        history.append(wcss(points, labels, updated))
        displacement = float(np.max(np.linalg.norm(updated - centers, axis=1)))
        centers = updated
        if displacement < eps:
            converged = True
            break

    return KMeansResult(
        assignment=ClusterAssignment.from_labels(labels.tolist(), k),
        centroids=Centroids(centers, iteration=iteration),
        iterations=iteration,
        converged=converged,
        wcss_history=tuple(history),
        reseeded=reseeded,
    )
