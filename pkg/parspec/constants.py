"""Tunables shared by the clustering pipeline."""

from __future__ import annotations

import os
from typing import Dict

# Map/reduce granularity
SIMILARITY_TASKS_PER_WORKER = 2
MATVEC_TASKS_PER_WORKER = 1
KMEANS_TASKS_PER_WORKER = 1
KMEANS_BLOCK_SIZE = 64

# Similarity
SIGMA_SAMPLE_PAIRS = 1000
FALLBACK_SIGMA = 1.0

# Lanczos / eigen
LANCZOS_MIN_STEPS = 40
LANCZOS_EXTRA_STEPS = 20
LANCZOS_BREAKDOWN_TOL = 1e-12
RITZ_RESIDUAL_TOL = 1e-6
LANCZOS_MAX_RESTARTS = 3
QR_SWEEPS_PER_STEP = 30
JACOBI_OFFDIAG_TOL = 1e-13
JACOBI_SYMMETRY_TOL = 1e-12
JACOBI_MAX_DIM = 256
JACOBI_MAX_SWEEPS = 100
ZERO_EIGENVALUE_TOL = 1e-8
LOCKING_GAP_TOL = 1e-10

# K-means
KMEANS_EPS = 1e-9
KMEANS_MAX_ITER = 100

# Benchmark
BENCH_REPEATS = 3

# Environment overrides
SIMILARITY_TASKS_PER_WORKER = int(
    os.getenv("PARSPEC_SIMILARITY_TASKS_PER_WORKER", SIMILARITY_TASKS_PER_WORKER)
)
MATVEC_TASKS_PER_WORKER = int(os.getenv("PARSPEC_MATVEC_TASKS_PER_WORKER", MATVEC_TASKS_PER_WORKER))
KMEANS_BLOCK_SIZE = int(os.getenv("PARSPEC_KMEANS_BLOCK_SIZE", KMEANS_BLOCK_SIZE))
SIGMA_SAMPLE_PAIRS = int(os.getenv("PARSPEC_SIGMA_SAMPLE_PAIRS", SIGMA_SAMPLE_PAIRS))
LANCZOS_MIN_STEPS = int(os.getenv("PARSPEC_LANCZOS_MIN_STEPS", LANCZOS_MIN_STEPS))
LANCZOS_MAX_RESTARTS = int(os.getenv("PARSPEC_LANCZOS_MAX_RESTARTS", LANCZOS_MAX_RESTARTS))
RITZ_RESIDUAL_TOL = float(os.getenv("PARSPEC_RITZ_RESIDUAL_TOL", RITZ_RESIDUAL_TOL))
BENCH_REPEATS = int(os.getenv("PARSPEC_BENCH_REPEATS", BENCH_REPEATS))
DEBUG_NUMERICS = os.getenv("PARSPEC_DEBUG_NUMERICS", "false").lower() == "true"


def validate_constants() -> None:
    """Ensure granularities and tolerances remain usable."""
    for name, value in (
        ("SIMILARITY_TASKS_PER_WORKER", SIMILARITY_TASKS_PER_WORKER),
        ("MATVEC_TASKS_PER_WORKER", MATVEC_TASKS_PER_WORKER),
        ("KMEANS_TASKS_PER_WORKER", KMEANS_TASKS_PER_WORKER),
        ("KMEANS_BLOCK_SIZE", KMEANS_BLOCK_SIZE),
        ("SIGMA_SAMPLE_PAIRS", SIGMA_SAMPLE_PAIRS),
        ("LANCZOS_MIN_STEPS", LANCZOS_MIN_STEPS),
        ("BENCH_REPEATS", BENCH_REPEATS),
    ):
        if value < 1:
            raise ValueError(f"{name} must be >= 1, got {value}")

    if LANCZOS_MAX_RESTARTS < 0:
        raise ValueError(f"LANCZOS_MAX_RESTARTS must be >= 0, got {LANCZOS_MAX_RESTARTS}")

    if not (0 < RITZ_RESIDUAL_TOL < 1):
        raise ValueError(f"RITZ_RESIDUAL_TOL must be in (0, 1), got {RITZ_RESIDUAL_TOL}")


def get_constants_summary() -> Dict[str, object]:
    return {
        "granularity": {
            "similarity_tasks_per_worker": SIMILARITY_TASKS_PER_WORKER,
            "matvec_tasks_per_worker": MATVEC_TASKS_PER_WORKER,
            "kmeans_tasks_per_worker": KMEANS_TASKS_PER_WORKER,
            "kmeans_block_size": KMEANS_BLOCK_SIZE,
        },
        "lanczos": {
            "min_steps": LANCZOS_MIN_STEPS,
            "extra_steps": LANCZOS_EXTRA_STEPS,
            "breakdown_tol": LANCZOS_BREAKDOWN_TOL,
            "residual_tol": RITZ_RESIDUAL_TOL,
            "max_restarts": LANCZOS_MAX_RESTARTS,
        },
        "kmeans": {"eps": KMEANS_EPS, "max_iter": KMEANS_MAX_ITER},
        "bench_repeats": BENCH_REPEATS,
    }


if __name__ != "__main__":
    validate_constants()
