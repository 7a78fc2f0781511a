"""K-means data types."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable, Optional, Tuple

import numpy as np

from parspec.dataio import ClusterAssignment
from parspec.errors import DomainError
from parspec.mapreduce import TimingReport


@dataclass(frozen=True)
class Centroids:
    """``k`` center rows plus the iteration that produced them."""

    centers: np.ndarray
    iteration: int = 0

    def __post_init__(self) -> None:
        centers = np.array(self.centers, dtype=np.float64, copy=True)
        if centers.ndim != 2 or centers.shape[0] < 1:
            raise DomainError(f"centers must be a non-empty 2-D array, got shape {centers.shape}")
        if not np.all(np.isfinite(centers)):
            raise DomainError("centers contain non-finite values")
        if self.iteration < 0:
            raise DomainError(f"iteration must be >= 0, got {self.iteration}")
        centers.setflags(write=False)
        object.__setattr__(self, "centers", centers)

    @property
    def k(self) -> int:
        return int(self.centers.shape[0])

    @property
    def dimension(self) -> int:
        return int(self.centers.shape[1])


@dataclass(frozen=True)
class ClusterStats:
    """Coordinate sums and point count for one cluster (or one block's share of it)."""

    sums: np.ndarray
    count: int

    def __post_init__(self) -> None:
        sums = np.array(self.sums, dtype=np.float64, copy=True).reshape(-1)
        if self.count < 0:
            raise DomainError(f"count must be >= 0, got {self.count}")
        if not np.all(np.isfinite(sums)):
            raise DomainError("cluster sums contain non-finite values")
        sums.setflags(write=False)
        object.__setattr__(self, "sums", sums)
        object.__setattr__(self, "count", int(self.count))

    @classmethod
    def combine(cls, parts: Iterable["ClusterStats"]) -> "ClusterStats":
        """Merge partials with correctly rounded sums, so the result ignores their order."""
        parts = list(parts)
        if not parts:
            raise DomainError("nothing to combine")
        dimension = parts[0].sums.size
        stacked = np.vstack([part.sums for part in parts])
        if stacked.shape[1] != dimension:
            raise DomainError("partials differ in dimension")
        sums = np.array([math.fsum(stacked[:, axis]) for axis in range(dimension)])
        return cls(sums, sum(part.count for part in parts))

    def mean(self) -> Optional[np.ndarray]:
        return None if self.count == 0 else self.sums / self.count


@dataclass(frozen=True)
class KMeansResult:
    assignment: ClusterAssignment
    centroids: Centroids
    iterations: int
    converged: bool
    wcss_history: Tuple[float, ...] = ()
    reseeded: int = 0
    report: Optional[TimingReport] = field(default=None, compare=False)

    @property
    def labels(self) -> Tuple[int, ...]:
        return self.assignment.labels

    @property
    def objective(self) -> float:
        return self.wcss_history[-1] if self.wcss_history else 0.0
