"""Eigensolver data types."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from parspec.errors import DomainError
from parspec.mapreduce import TimingReport


def _frozen(array: np.ndarray, ndim: int, what: str) -> np.ndarray:
    copy = np.array(array, dtype=np.float64, copy=True)
    if copy.ndim != ndim:
        raise DomainError(f"{what} must be {ndim}-D, got shape {copy.shape}")
    if not np.all(np.isfinite(copy)):
        raise DomainError(f"{what} contains non-finite values")
    copy.setflags(write=False)
    return copy


@dataclass(frozen=True)
class DegreeVector:
    d: np.ndarray

    def __post_init__(self) -> None:
        d = _frozen(self.d, 1, "degree vector")
        if np.any(d < 0):
            raise DomainError("degrees must be nonnegative")
        object.__setattr__(self, "d", d)

    @property
    def n(self) -> int:
        return int(self.d.size)

    def first_isolated(self) -> Optional[int]:
        """Index of the first zero-degree vertex, if any."""
        zeros = np.flatnonzero(self.d == 0.0)
        return int(zeros[0]) if zeros.size else None


@dataclass(frozen=True)
class TridiagonalMatrix:
    """Symmetric tridiagonal ``T``: diagonal ``alphas`` (m) and off-diagonal ``betas`` (m-1)."""

    alphas: np.ndarray
    betas: np.ndarray

    def __post_init__(self) -> None:
        alphas = _frozen(np.asarray(self.alphas, dtype=np.float64).reshape(-1), 1, "alphas")
        betas = _frozen(np.asarray(self.betas, dtype=np.float64).reshape(-1), 1, "betas")
        if alphas.size < 1:
            raise DomainError("tridiagonal matrix needs at least one diagonal entry")
        if betas.size != alphas.size - 1:
            raise DomainError(f"expected {alphas.size - 1} off-diagonal entries, got {betas.size}")
        object.__setattr__(self, "alphas", alphas)
        object.__setattr__(self, "betas", betas)

    @property
    def size(self) -> int:
        return int(self.alphas.size)

    def to_dense(self) -> np.ndarray:
        return np.diag(self.alphas) + np.diag(self.betas, 1) + np.diag(self.betas, -1)


@dataclass(frozen=True)
class LanczosBasis:
    """Columns ``v_1..v_m`` of the Krylov basis.

    ``final_beta`` is the norm of the last residual vector; it is below the
    breakdown tolerance when the run stopped on an invariant subspace.
    """

    vectors: np.ndarray
    final_beta: float = 0.0

    def __post_init__(self) -> None:
        object.__setattr__(self, "vectors", _frozen(self.vectors, 2, "Lanczos basis"))

    @property
    def size(self) -> int:
        return int(self.vectors.shape[1])

    def orthogonality_error(self) -> float:
        """``max |<v_i, v_j> - delta_ij|``."""
        gram = self.vectors.T @ self.vectors
        return float(np.max(np.abs(gram - np.eye(self.size)))) if self.size else 0.0


@dataclass(frozen=True)
class SpectralEmbedding:
    """``Z`` holds the k smallest eigenvectors as columns, ``Y`` its row-normalised copy."""

    Z: np.ndarray
    Y: np.ndarray
    eigenvalues: np.ndarray
    zero_rows: int = 0
    report: Optional[TimingReport] = field(default=None, compare=False)

    def __post_init__(self) -> None:
        z = _frozen(self.Z, 2, "Z")
        y = _frozen(self.Y, 2, "Y")
        eigenvalues = _frozen(self.eigenvalues, 1, "eigenvalues")
        if z.shape != y.shape:
            raise DomainError(f"Z {z.shape} and Y {y.shape} differ in shape")
        if eigenvalues.size != z.shape[1]:
            raise DomainError("one eigenvalue per column of Z is required")
        object.__setattr__(self, "Z", z)
        object.__setattr__(self, "Y", y)
        object.__setattr__(self, "eigenvalues", eigenvalues)

    @property
    def n(self) -> int:
        return int(self.Z.shape[0])

    @property
    def k(self) -> int:
        return int(self.Z.shape[1])
