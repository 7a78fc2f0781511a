"""Assignment and update steps shared by the parallel and sequential K-means."""

from __future__ import annotations

from typing import Iterable, List, Optional, Sequence, Tuple

import numpy as np

from parspec.constants import KMEANS_BLOCK_SIZE
from parspec.errors import DomainError
from parspec.kmeans.types import Centroids, ClusterStats
from parspec.kvstore import RowKey, RowStore, SparseRow

CENTERS_TABLE = "centers"


def squared_distances(points: np.ndarray, centers: np.ndarray) -> np.ndarray:
    """``(b, k)`` squared Euclidean distances between point rows and center rows."""
    if points.shape[1] != centers.shape[1]:
        raise DomainError(f"dimension mismatch: points {points.shape[1]} vs centers {centers.shape[1]}")
    diff = points[:, None, :] - centers[None, :, :]
    return np.einsum("ijk,ijk->ij", diff, diff)


def assign_block(points: np.ndarray, centers: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    """Nearest center per row (lowest index on ties) and the squared distance to it."""
    distances = squared_distances(points, centers)
    labels = np.argmin(distances, axis=1)
    return labels, distances[np.arange(points.shape[0]), labels]


def nearest_center(y: np.ndarray, centers: Centroids) -> Tuple[int, float]:
    labels, distances = assign_block(np.atleast_2d(np.asarray(y, dtype=np.float64)), centers.centers)
    return int(labels[0]), float(distances[0])


def assign_map(y: np.ndarray, centers: Centroids) -> Tuple[int, ClusterStats]:
    """``(closest center index, (y, 1))``."""
    index, _ = nearest_center(y, centers)
    return index, ClusterStats(np.asarray(y, dtype=np.float64).reshape(-1), 1)


def block_stats(points: np.ndarray, labels: np.ndarray, k: int) -> List[Tuple[int, ClusterStats]]:
    """Per-cluster partial sums over one block, clusters in ascending order."""
    partials = []
    for cluster in range(k):
        members = points[labels == cluster]
        if members.shape[0]:
            partials.append((cluster, ClusterStats(np.sum(members, axis=0), members.shape[0])))
    return partials


def update_reduce(
    cluster: int,
    contributions: Iterable[ClusterStats],
    store: Optional[RowStore] = None,
    table: str = CENTERS_TABLE,
) -> Optional[np.ndarray]:
    """Mean of the contributions, written to ``(table, cluster)`` when a store is given.

    Returns ``None`` for an empty cluster; its row is left untouched.
    """
    total = ClusterStats.combine(contributions)
    center = total.mean()
    if center is not None and store is not None:
        store.put_row(RowKey(table, cluster), SparseRow.from_dense(center))
    return center


def block_bounds(n: int, block_size: int = KMEANS_BLOCK_SIZE) -> List[Tuple[int, int]]:
    """Fixed-size point blocks; independent of the worker count."""
    return [(lo, min(lo + block_size, n)) for lo in range(0, n, block_size)]


def farthest_points(
    distances: np.ndarray, offset: int, limit: int
) -> List[Tuple[float, int]]:
    """Up to ``limit`` ``(distance, index)`` pairs, farthest first, lower index on ties."""
    order = np.lexsort((np.arange(distances.size), -distances))[:limit]
    return [(float(distances[i]), offset + int(i)) for i in order]


def reseed_empty(
    centers: np.ndarray,
    empty: Sequence[int],
    candidates: Sequence[Tuple[float, int]],
    points: np.ndarray,
) -> np.ndarray:
    """Move each empty center to the next point farthest from its assigned center."""
    ranked = sorted(candidates, key=lambda item: (-item[0], item[1]))
    updated = centers.copy()
    for cluster, (_, index) in zip(empty, ranked):
        updated[cluster] = points[index]
    return updated


def wcss(points: np.ndarray, labels: Sequence[int], centers: np.ndarray) -> float:
    """Within-cluster sum of squared distances."""
    labels = np.asarray(labels, dtype=np.int64)
    if labels.size == 0:
        return 0.0
    diff = points - centers[labels]
    return float(np.sum(np.einsum("ij,ij->i", diff, diff)))


def write_centers(store: RowStore, centroids: Centroids, table: str = CENTERS_TABLE) -> None:
    """Rows ``0..k-1`` hold the centers; the iteration count is table metadata."""
    for cluster, center in enumerate(centroids.centers):
        store.put_row(RowKey(table, cluster), SparseRow.from_dense(center))
    store.set_meta(table, "iteration", centroids.iteration)


def read_centers(store: RowStore, k: int, dimension: int, table: str = CENTERS_TABLE) -> Centroids:
    return Centroids(
        store.read_dense(table, k, dimension),
        iteration=int(store.get_meta(table, "iteration", 0)),
    )
