"""Initial center selection."""

from __future__ import annotations

from typing import Sequence, Union

import numpy as np

from parspec.errors import ConfigError, DomainError
from parspec.kmeans.ops import squared_distances

InitSpec = Union[str, Sequence[int], np.ndarray]


def kmeans_plus_plus(points: np.ndarray, k: int, seed: int = 0) -> np.ndarray:
    """Indices chosen by D^2 sampling; coincident points fall back to the lowest unused index."""
    n = points.shape[0]
    rng = np.random.default_rng(seed)
    chosen = [int(rng.integers(n))]
    closest = squared_distances(points, points[chosen]).min(axis=1)
    while len(chosen) < k:
        total = float(np.sum(closest))
        if total > 0.0:
            index = int(rng.choice(n, p=closest / total))
        else:
            unused = np.setdiff1d(np.arange(n), chosen)
            index = int(unused[0])
        chosen.append(index)
        closest = np.minimum(closest, squared_distances(points, points[[index]])[:, 0])
    return np.asarray(chosen, dtype=np.int64)


def parse_init(text: str) -> InitSpec:
    """``kmeans++``, ``first-k`` or ``indices=i,j,...``."""
    text = text.strip()
    if text in ("kmeans++", "first-k"):
        return text
    if text.startswith("indices="):
        try:
            return [int(token) for token in text[len("indices=") :].split(",") if token.strip()]
        except ValueError as exc:
            raise ConfigError(f"invalid init indices {text!r}") from exc
    raise ConfigError(f"unknown init {text!r}; expected kmeans++, first-k or indices=...")


def initial_centers(points: np.ndarray, k: int, init: InitSpec = "kmeans++", seed: int = 0) -> np.ndarray:
    """Starting ``k x d`` centers for ``points`` according to ``init``."""
    n = points.shape[0]
    if not (1 <= k <= n):
        raise DomainError(f"k must be in [1, n={n}], got {k}")
    if isinstance(init, str):
        init = parse_init(init)
    if isinstance(init, str):
        indices = kmeans_plus_plus(points, k, seed) if init == "kmeans++" else np.arange(k)
        return points[indices].copy()

    array = np.asarray(init)
    if array.ndim == 2:
        if array.shape != (k, points.shape[1]):
            raise DomainError(f"explicit centers must have shape {(k, points.shape[1])}, got {array.shape}")
        return array.astype(np.float64, copy=True)
    indices = array.astype(np.int64).reshape(-1)
    if indices.size != k:
        raise DomainError(f"expected {k} initial indices, got {indices.size}")
    if np.unique(indices).size != k:
        raise DomainError("initial indices must be distinct")
    if np.any(indices < 0) or np.any(indices >= n):
        raise DomainError(f"initial indices must lie in [0, {n})")
    return points[indices].copy()
