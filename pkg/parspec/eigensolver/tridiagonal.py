"""Implicit-shift QL iteration for symmetric tridiagonal matrices."""

from __future__ import annotations

import math
from typing import Optional, Tuple

import numpy as np

from parspec.constants import QR_SWEEPS_PER_STEP
from parspec.eigensolver.types import TridiagonalMatrix
from parspec.errors import NumericalError

_EPS = float(np.finfo(np.float64).eps)


def tridiagonal_eigen(
    tridiagonal: TridiagonalMatrix, max_sweeps: Optional[int] = None
) -> Tuple[np.ndarray, np.ndarray]:
    """Eigenvalues (ascending) and orthogonal eigenvector matrix of ``T``.

    Deflates one eigenvalue at a time from the top-left using Wilkinson-style
    shifts and Givens rotations chased down the band; rotations are
    accumulated into the eigenvector matrix.
    """
    m = tridiagonal.size
    limit = QR_SWEEPS_PER_STEP * m if max_sweeps is None else max_sweeps
    d = tridiagonal.alphas.copy()
    e = np.zeros(m, dtype=np.float64)
    e[: m - 1] = tridiagonal.betas
    z = np.eye(m, dtype=np.float64)
    sweeps = 0

    for l in range(m):
        while True:
            split = l
            while split < m - 1:
                scale = abs(d[split]) + abs(d[split + 1])
                if abs(e[split]) <= _EPS * scale:
                    break
                split += 1
            if split == l:
                break
            if sweeps >= limit:
                raise NumericalError(f"tridiagonal QR did not converge in {limit} sweeps")
            sweeps += 1

            g = (d[l + 1] - d[l]) / (2.0 * e[l])
            r = math.hypot(g, 1.0)
            g = d[split] - d[l] + e[l] / (g + math.copysign(r, g))
            s = c = 1.0
            p = 0.0
            deflated = False
            for i in range(split - 1, l - 1, -1):
                f = s * e[i]
                b = c * e[i]
                r = math.hypot(f, g)
                e[i + 1] = r
                if r == 0.0:
                    d[i + 1] -= p
                    e[split] = 0.0
                    deflated = True
                    break
                s = f / r
                c = g / r
                g = d[i + 1] - p
                r = (d[i] - g) * s + 2.0 * c * b
                p = s * r
                d[i + 1] = g + p
                g = c * r - b
                upper = z[:, i + 1].copy()
                z[:, i + 1] = s * z[:, i] + c * upper
                z[:, i] = c * z[:, i] - s * upper
            if deflated:
                continue
            d[l] -= p
            e[l] = g
            e[split] = 0.0

    order = np.argsort(d, kind="stable")
    return d[order], z[:, order]
