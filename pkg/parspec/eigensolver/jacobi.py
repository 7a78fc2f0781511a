"""Cyclic Jacobi eigensolver, the brute-force reference for dense symmetric matrices."""

from __future__ import annotations

import math
from typing import Tuple

import numpy as np

from parspec.constants import (
    JACOBI_MAX_DIM,
    JACOBI_MAX_SWEEPS,
    JACOBI_OFFDIAG_TOL,
    JACOBI_SYMMETRY_TOL,
)
from parspec.errors import DomainError, NumericalError


def _off_diagonal_norm(a: np.ndarray) -> float:
    return float(np.sqrt(2.0 * np.sum(np.triu(a, 1) ** 2)))


def jacobi_eigen_oracle(matrix: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    """All eigenpairs of a dense symmetric matrix, eigenvalues ascending.

    Sweeps rotate every ``(p, q)`` pair in row-cyclic order until the
    off-diagonal Frobenius norm drops below ``1e-13 * max(1, ||A||_F)``.
    """
    a = np.array(matrix, dtype=np.float64, copy=True)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise DomainError(f"expected a square matrix, got shape {a.shape}")
    n = a.shape[0]
    if n > JACOBI_MAX_DIM:
        raise DomainError(f"Jacobi oracle is limited to n <= {JACOBI_MAX_DIM}, got {n}")
    if not np.all(np.isfinite(a)):
        raise DomainError("matrix contains non-finite values")
    if n and np.max(np.abs(a - a.T)) > JACOBI_SYMMETRY_TOL * max(1.0, float(np.max(np.abs(a)))):
        raise DomainError("matrix is not symmetric")
    a = 0.5 * (a + a.T)
    v = np.eye(n, dtype=np.float64)
    tolerance = JACOBI_OFFDIAG_TOL * max(1.0, float(np.linalg.norm(a)))

    for _ in range(JACOBI_MAX_SWEEPS):
        if _off_diagonal_norm(a) < tolerance:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                if apq == 0.0:
                    continue
                theta = (a[q, q] - a[p, p]) / (2.0 * apq)
                if theta == 0.0:
                    t = 1.0
                else:
                    t = math.copysign(1.0, theta) / (abs(theta) + math.sqrt(theta * theta + 1.0))
                c = 1.0 / math.sqrt(t * t + 1.0)
                s = t * c

                col_p = a[:, p].copy()
                col_q = a[:, q].copy()
                a[:, p] = c * col_p - s * col_q
                a[:, q] = s * col_p + c * col_q
                row_p = a[p, :].copy()
                row_q = a[q, :].copy()
                a[p, :] = c * row_p - s * row_q
                a[q, :] = s * row_p + c * row_q
                a[p, q] = a[q, p] = 0.0

                vec_p = v[:, p].copy()
                vec_q = v[:, q].copy()
                v[:, p] = c * vec_p - s * vec_q
                v[:, q] = s * vec_p + c * vec_q
    else:
        if _off_diagonal_norm(a) >= tolerance:
            raise NumericalError(f"Jacobi did not converge in {JACOBI_MAX_SWEEPS} sweeps")

    eigenvalues = np.diag(a).copy()
    order = np.argsort(eigenvalues, kind="stable")
    return eigenvalues[order], v[:, order]
