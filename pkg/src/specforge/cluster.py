"""Lloyd's k-means with k-means++ seeding, deterministic under a fixed seed."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

__all__ = ["ClusterParams", "kmeans"]


@dataclass(frozen=True)
class ClusterParams:
    k: int
    max_iters: int = 100
    seed: int = 0
    init: str = "k-means++"

    def __post_init__(self):
        if self.k < 1:
            raise ValueError("k must be >= 1")
        if self.max_iters < 1:
            raise ValueError("max_iters must be >= 1")
        if self.init != "k-means++":
            raise ValueError(f"unsupported init {self.init!r}")


def _sq_dists(X: np.ndarray, C: np.ndarray) -> np.ndarray:
    """(N, k) squared distances via the expanded form; clipped for fp noise."""
    d2 = (X * X).sum(axis=1)[:, None] + (C * C).sum(axis=1)[None, :] - 2.0 * X @ C.T
    return np.maximum(d2, 0.0)


def _kpp_init(X: np.ndarray, k: int, rng: np.random.Generator) -> np.ndarray:
    n = X.shape[0]
    centers = np.empty((k, X.shape[1]))
    centers[0] = X[int(rng.integers(n))]
    d2 = ((X - centers[0]) ** 2).sum(axis=1)
    for j in range(1, k):
        total = d2.sum()
        if total > 0:
            pick = int(rng.choice(n, p=d2 / total))
        else:
            pick = int(rng.integers(n))  # all remaining points coincide with chosen centers
        centers[j] = X[pick]
        d2 = np.minimum(d2, ((X - centers[j]) ** 2).sum(axis=1))
    return centers


def kmeans(features: np.ndarray, params: ClusterParams) -> tuple[np.ndarray, np.ndarray]:
    """Cluster rows of `features`; returns (assignments, centroids).

    Iterates until assignments stabilize or max_iters is hit. A cluster left
    empty by an assignment step is re-seeded to the point farthest from its
    (stale) centroid before the next iteration.
    """
    X = np.asarray(features, dtype=np.float64)
    n = X.shape[0]
    if params.k > n:
        raise ValueError(f"k={params.k} exceeds the {n} available points")
    rng = np.random.default_rng(params.seed)
    centers = _kpp_init(X, params.k, rng)

    assign = None
    for _ in range(params.max_iters):
        new_assign = np.argmin(_sq_dists(X, centers), axis=1)
        counts = np.bincount(new_assign, minlength=params.k)
        if assign is not None and np.all(counts > 0) and np.array_equal(new_assign, assign):
            break
        assign = new_assign
        taken: set[int] = set()
        for j in range(params.k):
            if counts[j] > 0:
                centers[j] = X[assign == j].mean(axis=0)
            else:
                far = ((X - centers[j]) ** 2).sum(axis=1)
                for pick in np.argsort(-far):
                    if int(pick) not in taken:
                        taken.add(int(pick))
                        centers[j] = X[pick]
                        break
    return assign, centers
