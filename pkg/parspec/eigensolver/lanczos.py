"""Lanczos tridiagonalisation of a symmetric operator."""

from __future__ import annotations

from typing import Callable, List, Optional, Tuple, Union

import numpy as np

from parspec.constants import LANCZOS_BREAKDOWN_TOL
from parspec.eigensolver.laplacian import NormalizedLaplacian
from parspec.eigensolver.types import LanczosBasis, TridiagonalMatrix
from parspec.errors import DomainError

Operator = Union[NormalizedLaplacian, np.ndarray, Callable[[np.ndarray], np.ndarray]]


def as_callable(operator: Operator) -> Callable[[np.ndarray], np.ndarray]:
    if isinstance(operator, NormalizedLaplacian):
        return operator.apply
    if isinstance(operator, np.ndarray):
        dense = operator
        return lambda v: dense @ v
    if callable(operator):
        return operator
    raise DomainError(f"unsupported operator type {type(operator).__name__}")


def _project_out(w: np.ndarray, basis: Optional[np.ndarray]) -> np.ndarray:
    if basis is None or basis.shape[1] == 0:
        return w
    return w - basis @ (basis.T @ w)


def lanczos(
    operator: Operator,
    n: int,
    steps: int,
    seed: int = 0,
    *,
    start: Optional[np.ndarray] = None,
    reorthogonalize: bool = True,
    locked: Optional[np.ndarray] = None,
) -> Tuple[TridiagonalMatrix, LanczosBasis]:
    """Run up to ``steps`` Lanczos steps from a seeded unit start vector.

    Recurrence per step: ``w = L v_j - beta_j v_{j-1}``, ``alpha_j = (w, v_j)``,
    ``w -= alpha_j v_j``, ``beta_{j+1} = ||w||``. With ``reorthogonalize``
    ``w`` is projected (twice) against every earlier basis vector. Columns of
    ``locked`` are always projected out, so the run stays in their orthogonal
    complement. Stops early when ``beta_{j+1}`` falls below the breakdown
    tolerance.
    """
    if n < 1:
        raise DomainError("Lanczos needs a dimension n >= 1")
    if not (1 <= steps <= n):
        raise DomainError(f"steps must be in [1, {n}], got {steps}")
    if locked is not None and locked.shape[0] != n:
        raise DomainError(f"locked vectors have {locked.shape[0]} rows, expected {n}")
    apply = as_callable(operator)

    if start is None:
        v = np.random.default_rng(seed).standard_normal(n)
    else:
        v = np.asarray(start, dtype=np.float64).reshape(-1).copy()
        if v.size != n:
            raise DomainError(f"start vector has {v.size} entries, expected {n}")
    v = _project_out(v, locked)
    norm = float(np.linalg.norm(v))
    if norm < LANCZOS_BREAKDOWN_TOL:
        raise DomainError("start vector vanishes in the complement of the locked vectors")
    v = v / norm

    basis = np.zeros((n, steps), dtype=np.float64)
    alphas: List[float] = []
    betas: List[float] = []
    v_prev = np.zeros(n, dtype=np.float64)
    beta = 0.0
    final_beta = 0.0

    for j in range(steps):
        basis[:, j] = v
        w = np.asarray(apply(v), dtype=np.float64) - beta * v_prev
        alpha = float(np.dot(w, v))
        w = w - alpha * v
        if reorthogonalize:
            for _ in range(2):
                w = _project_out(w, basis[:, : j + 1])
                w = _project_out(w, locked)
        else:
            w = _project_out(w, locked)
        alphas.append(alpha)
        final_beta = float(np.linalg.norm(w))
        if j == steps - 1 or final_beta < LANCZOS_BREAKDOWN_TOL:
            break
        betas.append(final_beta)
        v_prev = v
        v = w / final_beta
        beta = final_beta

    used = len(alphas)
    return (
        TridiagonalMatrix(np.asarray(alphas), np.asarray(betas)),
        LanczosBasis(basis[:, :used], final_beta=final_beta),
    )
