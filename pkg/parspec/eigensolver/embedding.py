"""Smallest eigenvectors of the normalized Laplacian and the row-normalised embedding."""

from __future__ import annotations

import csv
import time
from collections import Counter
from pathlib import Path
from typing import List, Optional, Sequence, Tuple, Union

import numpy as np

from parspec.constants import (
    LANCZOS_EXTRA_STEPS,
    LANCZOS_MAX_RESTARTS,
    LANCZOS_MIN_STEPS,
    LOCKING_GAP_TOL,
    RITZ_RESIDUAL_TOL,
)
from parspec.eigensolver.lanczos import lanczos
from parspec.eigensolver.laplacian import NormalizedLaplacian
from parspec.eigensolver.tridiagonal import tridiagonal_eigen
from parspec.eigensolver.types import SpectralEmbedding
from parspec.errors import ConvergenceError, DomainError
from parspec.kvstore import RowStore
from parspec.mapreduce import TimingReport
from parspec.utils.logger import StageLogger

log = StageLogger("Lanczos")

RESIDUAL_COUNTER = "residual_row_products"
GHOST_REMAINDER = 0.5


def default_lanczos_steps(n: int, k: int) -> int:
    return min(n, max(2 * k + LANCZOS_EXTRA_STEPS, LANCZOS_MIN_STEPS))


def row_normalize(z: np.ndarray) -> Tuple[np.ndarray, int]:
    """Unit-norm rows; all-zero rows become ``e_1``. Returns the copy and the zero-row count."""
    norms = np.linalg.norm(z, axis=1)
    zero = norms == 0.0
    y = np.zeros_like(z)
    y[~zero] = z[~zero] / norms[~zero, None]
    if np.any(zero):
        y[zero, 0] = 1.0
    return y, int(np.count_nonzero(zero))


class _LockedSet:
    """Accepted Ritz pairs; vectors are mutually orthonormal by construction."""

    def __init__(self, n: int) -> None:
        self.values: List[float] = []
        self.vectors: List[np.ndarray] = []
        self.n = n

    def __len__(self) -> int:
        return len(self.values)

    def matrix(self) -> Optional[np.ndarray]:
        if not self.vectors:
            return None
        return np.column_stack(self.vectors)

    def orthogonal_part(self, vector: np.ndarray) -> Optional[np.ndarray]:
        """Unit component of ``vector`` outside the locked span, or None if it mostly lies inside."""
        w = vector / np.linalg.norm(vector)
        basis = self.matrix()
        if basis is None:
            return w
        for _ in range(2):
            w = w - basis @ (basis.T @ w)
        norm = float(np.linalg.norm(w))
        if norm < GHOST_REMAINDER:
            return None
        return w / norm

    def add(self, value: float, vector: np.ndarray) -> None:
        self.values.append(float(value))
        self.vectors.append(vector)

    def kth_value(self, k: int) -> float:
        return sorted(self.values)[k - 1]

    def smallest(self, k: int) -> Tuple[np.ndarray, np.ndarray]:
        order = np.argsort(np.asarray(self.values), kind="stable")[:k]
        values = np.asarray(self.values)[order]
        vectors = np.column_stack([self.vectors[i] for i in order])
        return values, vectors


def smallest_k_eigenvectors(
    laplacian: NormalizedLaplacian,
    k: int,
    m: Optional[int] = None,
    seed: int = 0,
    *,
    steps: Optional[int] = None,
    reorthogonalize: bool = True,
    store: Optional[RowStore] = None,
    table: str = "Z",
) -> SpectralEmbedding:
    """The ``k`` smallest eigenpairs of ``laplacian`` via Lanczos rounds with locking.

    Each round runs Lanczos in the complement of the pairs locked so far and
    locks Ritz pairs in ascending order while their residual
    ``||L z - theta z||`` passes. Without ``reorthogonalize`` the plain
    recurrence interleaves converged pairs with spurious ones, so every pair
    below the cut is checked and Ritz vectors that mostly repeat a locked
    vector are skipped. Rounds continue until ``k`` pairs are locked
    and a fresh round finds nothing below the k-th of them. A round that
    locks nothing is a restart: seed ``seed + r`` and twice the steps, at
    most ``LANCZOS_MAX_RESTARTS`` times.
    """
    if m is not None and m != laplacian.worker_count:
        laplacian = laplacian.with_workers(m)
    n = laplacian.n
    if not (1 <= k <= n):
        raise DomainError(f"k must be in [1, {n}], got {k}")

    started = time.perf_counter()
    before = Counter(laplacian.counters)
    step_budget = steps if steps is not None else default_lanczos_steps(n, k)
    locked = _LockedSet(n)
    counters: Counter = Counter()
    restarts = 0
    worst_residual = 0.0

    while len(locked) < n:
        free = n - len(locked)
        round_steps = min(step_budget, free)
        tridiagonal, basis = lanczos(
            laplacian,
            n,
            round_steps,
            seed + restarts,
            reorthogonalize=reorthogonalize,
            locked=locked.matrix(),
        )
        counters["lanczos_rounds"] += 1
        counters["lanczos_steps"] += basis.size
        ritz_values, ritz_coordinates = tridiagonal_eigen(tridiagonal)
        ritz_vectors = basis.vectors @ ritz_coordinates

        accepted = 0
        complete = False
        worst_residual = 0.0
        for index, theta in enumerate(ritz_values):
            if len(locked) >= k and theta >= locked.kth_value(k) - LOCKING_GAP_TOL:
                # a round sees one copy of a repeated eigenvalue
                complete = index == 0
                break
            vector = locked.orthogonal_part(ritz_vectors[:, index])
            if vector is None:
                # ghost copy of a pair locked earlier in this round
                continue
            residual = float(
                np.linalg.norm(laplacian.apply(vector, RESIDUAL_COUNTER) - theta * vector)
            )
            if residual > RITZ_RESIDUAL_TOL:
                worst_residual = max(worst_residual, residual)
                if reorthogonalize:
                    break
                # without reorthogonalization unconverged pairs sit among converged ones
                continue
            locked.add(theta, vector)
            accepted += 1
        else:
            # an invariant subspace may hide further copies of a repeated eigenvalue
            complete = len(locked) == n

        log.debug(
            "round %d: %d steps, locked %d (total %d)",
            counters["lanczos_rounds"],
            basis.size,
            accepted,
            len(locked),
        )
        if complete:
            break
        if accepted == 0:
            restarts += 1
            counters["lanczos_restarts"] += 1
            if restarts > LANCZOS_MAX_RESTARTS:
                raise ConvergenceError(worst_residual, restarts - 1)
            step_budget *= 2
            log.warning(
                "no Ritz pair converged (worst residual %.3e); restart %d with %d steps",
                worst_residual,
                restarts,
                step_budget,
            )

    if len(locked) < k:
        raise ConvergenceError(worst_residual, restarts)

    eigenvalues, z = locked.smallest(k)
    y, zero_rows = row_normalize(z)
    if zero_rows:
        log.warning("%d zero rows in Z replaced by e_1", zero_rows)
    counters["zero_rows"] += zero_rows

    operator_counters = Counter(laplacian.counters)
    operator_counters.subtract(before)
    operator_counters.pop("operator_applications", None)
    counters.update(operator_counters)
    report = TimingReport(
        stage="eigensolver",
        worker_count=laplacian.worker_count,
        wall_seconds=time.perf_counter() - started,
        op_counters={name: int(value) for name, value in sorted(counters.items())},
        metadata={
            "reorthogonalize": str(reorthogonalize).lower(),
            "initial_steps": str(steps if steps is not None else default_lanczos_steps(n, k)),
        },
    )
    embedding = SpectralEmbedding(Z=z, Y=y, eigenvalues=eigenvalues, zero_rows=zero_rows, report=report)
    if store is not None:
        persist_embedding(embedding, store, table)
    log.info(
        "k=%d: eigenvalues %s after %d rounds (%d restarts)",
        k,
        np.array2string(eigenvalues, precision=6),
        counters["lanczos_rounds"],
        restarts,
    )
    return embedding


def persist_embedding(embedding: SpectralEmbedding, store: RowStore, table: str = "Z") -> None:
    """Row ``i`` of ``Z`` under ``(table, i)``; eigenvalues as table metadata."""
    store.drop_table(table)
    store.put_dense_rows(table, embedding.Z)
    store.set_meta(table, "eigenvalues", [float(value) for value in embedding.eigenvalues])


def write_eigenvalues_csv(eigenvalues: Sequence[float], path: Union[str, Path]) -> None:
    """``index,eigenvalue`` rows in ascending order."""
    with open(path, "w", newline="", encoding="utf-8") as handle:
        writer = csv.writer(handle, lineterminator="\n")
        writer.writerow(["index", "eigenvalue"])
        for index, value in enumerate(sorted(float(v) for v in eigenvalues)):
            writer.writerow([index, repr(value)])
