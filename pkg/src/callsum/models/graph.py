"""Weighted PageRank over sentence similarity graphs."""

from __future__ import annotations

import numpy as np


def pagerank(
    weights: np.ndarray,
    damping: float = 0.85,
    tol: float = 1e-6,
    max_iter: int = 100,
) -> np.ndarray:
    """Fixpoint of r_i = (1 - d)/n + d * sum_j (w_ji / sum_k w_jk) * r_j.

    Rows with zero total weight (isolated nodes) distribute their rank
    uniformly. Iteration stops when the L1 change drops below ``tol``. The
    result sums to 1.
    """
    w = np.asarray(weights, dtype=float)
    if w.ndim != 2 or w.shape[0] != w.shape[1]:
        raise ValueError("weights must be a square matrix")
    if not np.all(np.isfinite(w)):
        raise ValueError("weights must be finite")
    if np.any(w < 0):
        raise ValueError("weights must be non-negative")
    n = w.shape[0]
    if n == 0:
        raise ValueError("graph must have at least one node")

    row_sums = w.sum(axis=1)
    transition = np.full((n, n), 1.0 / n)
    linked = row_sums > 0
    transition[linked] = w[linked] / row_sums[linked, None]

    rank = np.full(n, 1.0 / n)
    for _ in range(max_iter):
        updated = (1.0 - damping) / n + damping * (transition.T @ rank)
        if np.abs(updated - rank).sum() < tol:
            rank = updated
            break
        rank = updated
    return rank
