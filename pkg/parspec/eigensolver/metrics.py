"""Graph cut, volume and dense Laplacian assemblies."""

from __future__ import annotations

from typing import Iterable, Set, Tuple

import numpy as np

from parspec.eigensolver.laplacian import degree_vector
from parspec.errors import DomainError, SingularityError
from parspec.similarity import SparseSymmetricMatrix


def _vertex_set(vertices: Iterable[int], n: int, name: str) -> Set[int]:
    chosen = {int(v) for v in vertices}
    for vertex in chosen:
        if not (0 <= vertex < n):
            raise DomainError(f"vertex {vertex} in {name} outside [0, {n})")
    return chosen


def cut_and_volume(
    similarity: SparseSymmetricMatrix, a: Iterable[int], b: Iterable[int]
) -> Tuple[float, float]:
    """``W(A, B) = sum_{i in A, j in B} w_ij`` and ``vol(A) = sum_{i in A} d_i``."""
    set_a = _vertex_set(a, similarity.n, "A")
    set_b = _vertex_set(b, similarity.n, "B")
    degrees = degree_vector(similarity).d
    members_b = np.zeros(similarity.n, dtype=bool)
    members_b[list(set_b)] = True
    cut = 0.0
    volume = 0.0
    for i in sorted(set_a):
        row = similarity.row(i)
        cut += float(np.sum(row.values[members_b[row.columns]]))
        volume += float(degrees[i])
    return cut, volume


def indicator_vector(vertices: Iterable[int], n: int) -> np.ndarray:
    """``l_A``: 1 on ``A``, 0 elsewhere."""
    indicator = np.zeros(n, dtype=np.float64)
    chosen = _vertex_set(vertices, n, "A")
    indicator[list(chosen)] = 1.0
    return indicator


def unnormalized_laplacian_dense(similarity: SparseSymmetricMatrix) -> np.ndarray:
    """``L = D - S``."""
    dense = similarity.to_dense()
    return np.diag(dense.sum(axis=1)) - dense


def normalized_laplacian_dense(similarity: SparseSymmetricMatrix) -> np.ndarray:
    """``L_sym = I - D^-1/2 S D^-1/2``."""
    dense = similarity.to_dense()
    degrees = dense.sum(axis=1)
    _require_positive(degrees)
    scale = 1.0 / np.sqrt(degrees)
    return np.eye(similarity.n) - scale[:, None] * dense * scale[None, :]


def random_walk_laplacian_dense(similarity: SparseSymmetricMatrix) -> np.ndarray:
    """``L_rw = I - D^-1 S``."""
    dense = similarity.to_dense()
    degrees = dense.sum(axis=1)
    _require_positive(degrees)
    return np.eye(similarity.n) - dense / degrees[:, None]


def _require_positive(degrees: np.ndarray) -> None:
    zeros = np.flatnonzero(degrees == 0.0)
    if zeros.size:
        raise SingularityError(int(zeros[0]))
