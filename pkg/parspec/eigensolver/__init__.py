"""Normalized Laplacian eigensolver."""

from parspec.eigensolver.embedding import (
    default_lanczos_steps,
    persist_embedding,
    row_normalize,
    smallest_k_eigenvectors,
    write_eigenvalues_csv,
)
from parspec.eigensolver.jacobi import jacobi_eigen_oracle
from parspec.eigensolver.lanczos import lanczos
from parspec.eigensolver.laplacian import NormalizedLaplacian, degree_vector, laplacian_apply
from parspec.eigensolver.metrics import (
    cut_and_volume,
    indicator_vector,
    normalized_laplacian_dense,
    random_walk_laplacian_dense,
    unnormalized_laplacian_dense,
)
from parspec.eigensolver.tridiagonal import tridiagonal_eigen
from parspec.eigensolver.types import (
    DegreeVector,
    LanczosBasis,
    SpectralEmbedding,
    TridiagonalMatrix,
)

__all__ = [
    # Types
    "DegreeVector",
    "LanczosBasis",
    "SpectralEmbedding",
    "TridiagonalMatrix",
    # Operator
    "NormalizedLaplacian",
    "degree_vector",
    "laplacian_apply",
    # Solvers
    "jacobi_eigen_oracle",
    "lanczos",
    "tridiagonal_eigen",
    "smallest_k_eigenvectors",
    "default_lanczos_steps",
    "row_normalize",
    # Persistence
    "persist_embedding",
    "write_eigenvalues_csv",
    # Metrics
    "cut_and_volume",
    "indicator_vector",
    "normalized_laplacian_dense",
    "random_walk_laplacian_dense",
    "unnormalized_laplacian_dense",
]
