"""Gaussian kernel, row pairing and parameter defaults."""

from __future__ import annotations

import math
from typing import FrozenSet, Tuple

import numpy as np

from parspec.constants import FALLBACK_SIGMA, SIGMA_SAMPLE_PAIRS
from parspec.dataio import PointSet
from parspec.errors import DomainError


def _check_sigma(sigma: float) -> None:
    if not (np.isfinite(sigma) and sigma > 0):
        raise DomainError(f"sigma must be a positive finite number, got {sigma}")


def gaussian_similarity(x_i: np.ndarray, x_j: np.ndarray, sigma: float) -> float:
    """``exp(-||x_i - x_j||^2 / (2 sigma^2))``, a value in (0, 1]."""
    _check_sigma(sigma)
    a = np.asarray(x_i, dtype=np.float64).reshape(-1)
    b = np.asarray(x_j, dtype=np.float64).reshape(-1)
    if a.shape != b.shape:
        raise DomainError(f"dimension mismatch: {a.size} vs {b.size}")
    diff = a - b
    return float(np.exp(-np.dot(diff, diff) / (2.0 * sigma * sigma)))


def gaussian_row_segment(points: np.ndarray, row: int, sigma: float) -> np.ndarray:
    """Kernel values of ``points[row]`` against ``points[row:]`` (the upper-triangle segment)."""
    diff = points[row:] - points[row]
    squared = np.einsum("ij,ij->i", diff, diff)
    return np.exp(-squared / (2.0 * sigma * sigma))


def pair_indices(i: int, n: int) -> FrozenSet[int]:
    """1-based rows handled by map key ``i``: ``{i, n - i + 1}``."""
    if n < 1:
        raise DomainError(f"point count must be >= 1, got {n}")
    upper = (n + 1) // 2
    if not (1 <= i <= upper):
        raise DomainError(f"pairing index {i} outside [1, {upper}]")
    return frozenset((i, n - i + 1))


def paired_rows(key: int, n: int) -> Tuple[int, ...]:
    """0-based rows for map key ``key``: ``(key, n - 1 - key)``, deduplicated for the middle row."""
    return tuple(sorted(row - 1 for row in pair_indices(key + 1, n)))


def pairing_keys(n: int) -> range:
    return range((n + 1) // 2)


def default_knn_t(n: int) -> int:
    """``ceil(log2 n) + 1`` neighbours."""
    if n < 1:
        raise DomainError(f"point count must be >= 1, got {n}")
    return int(math.ceil(math.log2(n))) + 1


def default_sigma(points: PointSet, seed: int = 0, sample_pairs: int = SIGMA_SAMPLE_PAIRS) -> float:
    """Median distance over a seeded sample of distinct point pairs."""
    n = points.n
    if n < 2:
        return FALLBACK_SIGMA
    rng = np.random.default_rng(seed)
    first = rng.integers(0, n, size=sample_pairs)
    second = (first + rng.integers(1, n, size=sample_pairs)) % n
    distances = np.linalg.norm(points.points[first] - points.points[second], axis=1)
    sigma = float(np.median(distances))
    if not (np.isfinite(sigma) and sigma > 0):
        return FALLBACK_SIGMA
    return sigma
