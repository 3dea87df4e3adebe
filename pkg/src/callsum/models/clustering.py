"""K-means clustering with k-means++ seeding and deterministic tie-breaking."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np


@dataclass
class KMeansResult:
    assignments: np.ndarray  # (m,) cluster index per input vector
    centroids: np.ndarray  # (clusters, d)
    inertia: float
    inertia_history: list[float] = field(default_factory=list)
    iterations: int = 0


def kmeans(
    vectors: np.ndarray,
    clusters: int,
    seed: int = 0,
    max_iter: int = 100,
) -> KMeansResult:
    """Lloyd's algorithm with k-means++ seeding, Euclidean metric.

    Nearest-centroid ties break toward the lower centroid index. A cluster
    that loses all members keeps its previous centroid. Iteration stops at an
    assignment fixpoint or after ``max_iter`` rounds; the per-round inertia is
    checked to be non-increasing and recorded in ``inertia_history``.
    """
    x = np.asarray(vectors, dtype=float)
    if x.ndim != 2:
        raise ValueError("vectors must be a 2-d array")
    m = x.shape[0]
    if clusters < 1:
        raise ValueError("clusters must be >= 1")
    if m < clusters:
        raise ValueError(f"need at least {clusters} vectors, got {m}")

    rng = np.random.default_rng(seed)
    centroids = _plus_plus_seeds(x, clusters, rng)

    assignments = np.full(m, -1, dtype=int)
    history: list[float] = []
    rounds = 0
    for rounds in range(1, max_iter + 1):
        dist2 = ((x[:, None, :] - centroids[None, :, :]) ** 2).sum(axis=2)
        new_assignments = dist2.argmin(axis=1)  # argmin takes the lowest index on ties
        inertia = float(dist2[np.arange(m), new_assignments].sum())
        if history:
            assert inertia <= history[-1] + 1e-9 * max(1.0, history[-1]), (
                "inertia increased across Lloyd iterations"
            )
        history.append(inertia)
        if np.array_equal(new_assignments, assignments):
            break
        assignments = new_assignments
        for k in range(clusters):
            members = x[assignments == k]
            if len(members):
                centroids[k] = members.mean(axis=0)

    dist2 = ((x[:, None, :] - centroids[None, :, :]) ** 2).sum(axis=2)
    inertia = float(dist2[np.arange(m), assignments].sum())
    return KMeansResult(
        assignments=assignments,
        centroids=centroids,
        inertia=inertia,
        inertia_history=history,
        iterations=rounds,
    )


def _plus_plus_seeds(x: np.ndarray, clusters: int, rng: np.random.Generator) -> np.ndarray:
    m = x.shape[0]
    chosen = [int(rng.integers(m))]
    d2 = ((x - x[chosen[0]]) ** 2).sum(axis=1)
    for _ in range(1, clusters):
        total = d2.sum()
        if total == 0.0:  # all remaining points coincide with a centroid
            idx = int(rng.integers(m))
        else:
            idx = int(rng.choice(m, p=d2 / total))
        chosen.append(idx)
        d2 = np.minimum(d2, ((x - x[idx]) ** 2).sum(axis=1))
    return x[chosen].astype(float).copy()
