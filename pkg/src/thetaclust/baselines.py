"""Lloyd k-means with k-means++ seeding and seeded restarts.

Used as the comparison baseline in benchmarks, so it is kept plain: no
Elkan or Hamerly bounds.
"""
import time
from dataclasses import dataclass

import numpy as np

from .core import (
    SplitMix64,
    check_data,
    check_metric,
    check_nonnegative,
    check_positive_int,
    check_seed,
    mix_seed,
)
from .theta import Clustering, RunStats


@dataclass
class KMeansConfig:
    k: int
    n_init: int = 10
    max_iter: int = 300
    tol: float = 1e-4
    seed: int = 0

    def __post_init__(self):
        self.k = check_positive_int(self.k, "k")
        self.n_init = check_positive_int(self.n_init, "n_init")
        self.max_iter = check_positive_int(self.max_iter, "max_iter")
        self.tol = check_nonnegative(self.tol, "tol")
        self.seed = check_seed(self.seed)


@dataclass
class LloydResult:
    clustering: Clustering
    inertia: float
    iters_run: int
    inertia_history: list
    distance_evaluations: int


def _sq_dists(X, centroids):
    # (n, k) squared Euclidean distances, clipped at 0 against cancellation
    d2 = (
        np.einsum("ij,ij->i", X, X)[:, None]
        - 2.0 * X @ centroids.T
        + np.einsum("ij,ij->i", centroids, centroids)[None, :]
    )
    return np.maximum(d2, 0.0)


def _exact_sq_dists(X, centroids):
    diff = X[:, None, :] - centroids[None, :, :]
    return np.einsum("ijk,ijk->ij", diff, diff)


def _nearest(X, centroids):
    # Exact differences keep ties and the monotone-inertia check reliable
    # for small problems; the expanded form is used when memory would blow up.
    if X.shape[0] * centroids.shape[0] * X.shape[1] <= 4_000_000:
        d2 = _exact_sq_dists(X, centroids)
    else:
        d2 = _sq_dists(X, centroids)
    labels = np.argmin(d2, axis=1)
    return labels, d2[np.arange(X.shape[0]), labels]


def kmeanspp_init(X, k, seed):
    """k-means++ seeding.

    The first center is a uniformly drawn sample; each further center is
    drawn with probability proportional to the squared distance to the
    nearest center chosen so far. If every remaining weight is zero
    (only duplicates left) the draw is uniform over unchosen samples.

    Returns
    -------
    centers : ndarray of shape (k, n_features)
    """
    X = check_data(X)
    k = check_positive_int(k, "k")
    n = X.shape[0]
    if k > n:
        raise ValueError(f"k={k} exceeds the number of samples {n}")
    rng = SplitMix64(seed)
    chosen = [rng.integers(n)]
    closest = ((X - X[chosen[0]]) ** 2).sum(axis=1)
    for _ in range(1, k):
        total = closest.sum()
        if total > 0:
            cumulative = np.cumsum(closest)
            idx = int(np.searchsorted(cumulative, rng.random() * cumulative[-1], side="right"))
            idx = min(idx, n - 1)
            # never land on a zero-weight sample through rounding at the edges
            while closest[idx] == 0:
                idx = (idx + 1) % n
        else:
            free = np.setdiff1d(np.arange(n), chosen)
            idx = int(free[rng.integers(free.size)])
        chosen.append(idx)
        closest = np.minimum(closest, ((X - X[idx]) ** 2).sum(axis=1))
    return X[chosen].copy()


def lloyd(X, init, max_iter=300, tol=1e-4, metric="euclidean"):
    """Lloyd iterations from the centers ``init``.

    Each iteration assigns samples to the nearest center (ties to the
    lowest index) and moves every center to the mean of its samples. A
    center left without samples is re-seeded with the sample farthest
    from its own center. Iteration stops once the largest center shift is
    ``<= tol`` or after ``max_iter`` iterations; a final assignment then
    labels the samples against the returned centers.

    Returns
    -------
    LloydResult
        ``inertia_history[t]`` is the assignment cost at the start of
        iteration ``t``, followed by the final cost.
    """
    check_metric(metric)
    X = check_data(X)
    centroids = np.array(init, dtype=np.float64, copy=True)
    if centroids.ndim != 2 or centroids.shape[0] == 0:
        raise ValueError("init must be a non-empty 2-D array of centers")
    if centroids.shape[1] != X.shape[1]:
        raise ValueError(
            f"dimension mismatch: X has {X.shape[1]} features, init has {centroids.shape[1]}"
        )
    max_iter = check_positive_int(max_iter, "max_iter")
    tol = check_nonnegative(tol, "tol")
    n, k = X.shape[0], centroids.shape[0]

    history = []
    n_evals = 0
    iters_run = 0
    for _ in range(max_iter):
        labels, d2 = _nearest(X, centroids)
        n_evals += n * k
        history.append(float(d2.sum()))
        iters_run += 1

        counts = np.bincount(labels, minlength=k)
        sums = np.zeros_like(centroids)
        np.add.at(sums, labels, X)
        new = centroids.copy()
        nonempty = counts > 0
        new[nonempty] = sums[nonempty] / counts[nonempty, None]
        empty = np.flatnonzero(~nonempty)
        if empty.size:
            far = d2.copy()
            for c in empty:
                idx = int(np.argmax(far))
                new[c] = X[idx]
                far[idx] = -1.0

        shift = np.sqrt(((new - centroids) ** 2).sum(axis=1)).max()
        centroids = new
        if shift <= tol:
            break

    labels, d2 = _nearest(X, centroids)
    n_evals += n * k
    inertia = float(d2.sum())
    history.append(inertia)
    sizes = np.bincount(labels, minlength=k)
    clustering = Clustering(labels, centroids, sizes)
    return LloydResult(clustering, inertia, iters_run, history, n_evals)


def kmeans(X, config, metric="euclidean"):
    """Best of ``config.n_init`` seeded k-means++ / Lloyd trials.

    Trial ``r`` seeds k-means++ with ``mix_seed(config.seed, r)``. The
    trial with the smallest inertia wins, ties going to the earlier trial.

    Returns
    -------
    clustering : Clustering
    stats : RunStats
    """
    check_metric(metric)
    X = check_data(X)
    if not isinstance(config, KMeansConfig):
        raise TypeError("config must be a KMeansConfig")
    if config.k > X.shape[0]:
        raise ValueError(f"k={config.k} exceeds the number of samples {X.shape[0]}")
    start = time.perf_counter()
    best = None
    n_evals = 0
    for r in range(config.n_init):
        init = kmeanspp_init(X, config.k, mix_seed(config.seed, r))
        n_evals += X.shape[0] * config.k
        result = lloyd(X, init, config.max_iter, config.tol, metric)
        n_evals += result.distance_evaluations
        if best is None or result.inertia < best.inertia:
            best = result
    stats = RunStats(n_evals, time.perf_counter() - start, 0)
    return best.clustering, stats
