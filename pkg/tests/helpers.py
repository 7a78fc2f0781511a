from typing import List

import numpy as np


def random_symmetric(n: int, seed: int, density: float = 0.3) -> np.ndarray:
    """Nonnegative symmetric matrix with a connected path backbone and zero diagonal."""
    rng = np.random.default_rng(seed)
    upper = np.triu(rng.random((n, n)) * (rng.random((n, n)) < density), k=1)
    for i in range(n - 1):
        upper[i, i + 1] = max(upper[i, i + 1], 0.1 + rng.random())
    return upper + upper.T


def principal_angles(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    qa, _ = np.linalg.qr(a)
    qb, _ = np.linalg.qr(b)
    cosines = np.clip(np.linalg.svd(qa.T @ qb, compute_uv=False), -1.0, 1.0)
    return np.arccos(cosines)


def components_of(labels: List[int]) -> List[List[int]]:
    groups = {}
    for index, label in enumerate(labels):
        groups.setdefault(label, []).append(index)
    return sorted(groups.values())
