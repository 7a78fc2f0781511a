"""Similarity matrix construction."""

from parspec.similarity.builder import build_similarity, connected_components, graph_similarity
from parspec.similarity.kernel import (
    default_knn_t,
    default_sigma,
    gaussian_row_segment,
    gaussian_similarity,
    pair_indices,
    paired_rows,
    pairing_keys,
)
from parspec.similarity.types import SimilarityParams, SparseSymmetricMatrix

__all__ = [
    # Types
    "SimilarityParams",
    "SparseSymmetricMatrix",
    # Kernel
    "default_knn_t",
    "default_sigma",
    "gaussian_row_segment",
    "gaussian_similarity",
    "pair_indices",
    "paired_rows",
    "pairing_keys",
    # Builders
    "build_similarity",
    "connected_components",
    "graph_similarity",
]
