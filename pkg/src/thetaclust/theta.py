"""Distance-threshold clustering: sparse grouping (TSG), dense grouping by
shuffle-and-regroup (TDG) and nonlinear chaining of micro-clusters (TNC).

The functions here form the algorithmic layer. :mod:`thetaclust.estimators`
wraps them in scikit-learn style estimators.
"""
import time
from dataclasses import dataclass

import numpy as np

from . import _kernels
from .core import (
    check_data,
    check_metric,
    check_nonnegative,
    check_positive_int,
    check_seed,
    mix_seed,
    seeded_permutation,
)

CENTROID_UPDATES = ("running_mean", "frozen")


@dataclass
class Clustering:
    """A partition of the samples.

    Attributes
    ----------
    labels : ndarray of shape (n_samples,)
        Cluster id of each sample, in ``0..K-1``.
    centroids : ndarray of shape (K, n_features)
    sizes : ndarray of shape (K,)
        Number of samples carrying each label.
    """

    labels: np.ndarray
    centroids: np.ndarray
    sizes: np.ndarray

    @property
    def n_clusters(self):
        return int(self.centroids.shape[0])


@dataclass
class RunStats:
    """Cost accounting of one run. One distance evaluation is one
    (sample, centroid) distance."""

    distance_evaluations: int = 0
    wall_time: float = 0.0
    shuffles_performed: int = 0


@dataclass
class ThetaParams:
    theta: float
    iterations: int = 10
    epsilon: float = 0.0
    max_chain_rounds: int = 100
    centroid_update: str = "running_mean"

    def __post_init__(self):
        self.theta = check_nonnegative(self.theta, "theta")
        self.iterations = check_positive_int(self.iterations, "iterations")
        self.epsilon = check_nonnegative(self.epsilon, "epsilon")
        self.max_chain_rounds = check_positive_int(self.max_chain_rounds, "max_chain_rounds")
        _check_update(self.centroid_update)


def _check_update(centroid_update):
    if centroid_update not in CENTROID_UPDATES:
        raise ValueError(
            f"centroid_update must be one of {CENTROID_UPDATES}, got {centroid_update!r}"
        )
    return centroid_update == "frozen"


def _tsg(X, theta, order, frozen):
    labels, centroids, sizes, n_evals = _kernels.tsg_kernel(X, order, theta, frozen)
    return Clustering(labels, centroids, sizes), int(n_evals)


def tsg(X, theta, metric="euclidean", *, order=None, centroid_update="running_mean"):
    """Single pass threshold clustering.

    Samples are visited in row order (or in ``order`` if given). Each one
    joins the nearest existing cluster whose centroid lies within ``theta``
    (ties go to the lowest cluster id) or else founds a new cluster.

    Parameters
    ----------
    X : array-like of shape (n_samples, n_features)
    theta : float
        Distance threshold, ``>= 0``. Insertion uses ``distance <= theta``.
    metric : str
    order : array-like of int, optional
        Visiting order, a permutation of the row indices. Labels are still
        reported per original row, and cluster ids follow creation order.
    centroid_update : {"running_mean", "frozen"}
        ``"frozen"`` keeps the founding sample as the centroid.

    Returns
    -------
    clustering : Clustering
    stats : RunStats
    """
    check_metric(metric)
    X = check_data(X)
    theta = check_nonnegative(theta, "theta")
    frozen = _check_update(centroid_update)
    n = X.shape[0]
    if order is None:
        order = np.arange(n)
    else:
        order = np.ascontiguousarray(order, dtype=np.int64)
        if order.shape != (n,) or not np.array_equal(np.sort(order), np.arange(n)):
            raise ValueError("order must be a permutation of the sample indices")
    start = time.perf_counter()
    clustering, n_evals = _tsg(X, theta, order, frozen)
    stats = RunStats(n_evals, time.perf_counter() - start, 0)
    return clustering, stats


def assign_to_centroids(X, centroids, metric="euclidean"):
    """Label of the nearest centroid for every sample, ties to the lowest id.

    No threshold is applied.
    """
    check_metric(metric)
    X = check_data(X)
    centroids = np.asarray(centroids, dtype=np.float64)
    if centroids.ndim != 2 or centroids.shape[0] == 0:
        raise ValueError("centroids must be a non-empty 2-D array")
    centroids = check_data(centroids, "centroids")
    if centroids.shape[1] != X.shape[1]:
        raise ValueError(
            f"dimension mismatch: X has {X.shape[1]} features, centroids have {centroids.shape[1]}"
        )
    labels, _ = _kernels.nearest_kernel(X, centroids)
    return labels


def _from_labels(X, labels, n_labels):
    """Drop empty labels, compact the survivors in order, and recompute
    centroids as sample means."""
    sizes = np.bincount(labels, minlength=n_labels)
    keep = np.flatnonzero(sizes)
    remap = np.full(n_labels, -1, dtype=np.int64)
    remap[keep] = np.arange(keep.size)
    labels = remap[labels]
    sizes = sizes[keep]
    sums = np.zeros((keep.size, X.shape[1]))
    np.add.at(sums, labels, X)
    return Clustering(labels, sums / sizes[:, None], sizes)


def tdg(X, theta, iterations, seed, metric="euclidean", *, centroid_update="running_mean"):
    """Dense grouping: repeated shuffled TSG, then TSG over the pooled
    centroids, then unthresholded reassignment.

    Iteration ``i`` visits the samples in ``seeded_permutation(N,
    mix_seed(seed, i))``. Centroids of all runs are pooled in (iteration,
    creation) order and clustered by one more TSG pass with the same
    ``theta``. Each sample then goes to its nearest meta-centroid. Final
    centroids are the means of their assigned samples and meta-centroids
    left without samples are dropped.

    Returns
    -------
    clustering : Clustering
    stats : RunStats
        Distance evaluations summed over the shuffled runs, the pooled run
        and the reassignment pass.
    """
    check_metric(metric)
    X = check_data(X)
    theta = check_nonnegative(theta, "theta")
    iterations = check_positive_int(iterations, "iterations")
    seed = check_seed(seed)
    frozen = _check_update(centroid_update)
    n = X.shape[0]

    start = time.perf_counter()
    pool = []
    n_evals = 0
    for it in range(iterations):
        order = seeded_permutation(n, mix_seed(seed, it))
        run, evals = _tsg(X, theta, order, frozen)
        pool.append(run.centroids)
        n_evals += evals
    pool = np.ascontiguousarray(np.vstack(pool))
    meta, evals = _tsg(pool, theta, np.arange(pool.shape[0]), frozen)
    n_evals += evals

    labels, _ = _kernels.nearest_kernel(X, meta.centroids)
    n_evals += n * meta.n_clusters
    clustering = _from_labels(X, labels, meta.n_clusters)
    stats = RunStats(n_evals, time.perf_counter() - start, iterations)
    return clustering, stats


def chaining_list(centroids, epsilon, metric="euclidean"):
    """One set per centroid id holding itself and every centroid closer
    than ``epsilon`` (strict)."""
    check_metric(metric)
    centroids = check_data(centroids, "centroids")
    epsilon = check_nonnegative(epsilon, "epsilon")
    k_total = centroids.shape[0]
    sets = [{k} for k in range(k_total)]
    for j in range(k_total):
        for k in range(j + 1, k_total):
            if _kernels.euclid(centroids[j], centroids[k]) < epsilon:
                sets[j].add(k)
                sets[k].add(j)
    return sets


def _find(parent, x):
    root = x
    while parent[root] != root:
        root = parent[root]
    while parent[x] != root:
        parent[x], x = root, parent[x]
    return root


def chain_merge(centroids, epsilon, metric="euclidean", *, max_rounds=100):
    """Merge centroids transitively through links shorter than ``epsilon``.

    Returns, for every centroid, the smallest centroid id of its chain.

    The chaining list is merged with a union-find whose root is always
    the smaller id. Merging repeats until the number of chains stops
    changing, capped at ``max_rounds``; a full transitive closure is
    reached in the first round so the second only confirms it.

    Examples
    --------
    >>> chain_merge([[0.0], [10.0], [10.5], [30.0], [0.5], [1.0]], 0.6)
    array([0, 1, 1, 3, 0, 0])
    """
    max_rounds = check_positive_int(max_rounds, "max_rounds")
    sets = chaining_list(centroids, epsilon, metric)
    k_total = len(sets)
    relabel = np.arange(k_total)
    n_chains = k_total
    for _ in range(max_rounds):
        parent = list(relabel)
        for k, members in enumerate(sets):
            for j in members:
                rj, rk = _find(parent, j), _find(parent, k)
                if rj != rk:
                    parent[max(rj, rk)] = min(rj, rk)
        relabel = np.array([_find(parent, k) for k in range(k_total)])
        new_count = np.unique(relabel).size
        if new_count == n_chains:
            break
        n_chains = new_count
    return relabel


def tnc(X, params, seed, metric="euclidean"):
    """Nonlinear clustering by chaining TDG micro-clusters.

    Runs :func:`tdg` with ``params.theta`` and ``params.iterations``, then
    :func:`chain_merge` on its centroids with ``params.epsilon``. Samples
    inherit the chain of their micro-cluster. Chain ids are compacted to
    ``0..K'-1`` in order of their smallest micro-cluster id.

    Merged centroids are not recomputed: the returned clustering's
    ``centroids`` holds the representative (lowest id) micro-centroid of
    each chain, and ``members`` lists all micro-centroids of each chain.

    Returns
    -------
    clustering : Clustering
    members : list of ndarray
    stats : RunStats
    """
    if not isinstance(params, ThetaParams):
        raise TypeError("params must be a ThetaParams instance")
    micro, stats = tdg(
        X, params.theta, params.iterations, seed, metric, centroid_update=params.centroid_update
    )
    relabel = chain_merge(micro.centroids, params.epsilon, metric, max_rounds=params.max_chain_rounds)
    reps, chain_ids = np.unique(relabel, return_inverse=True)
    labels = chain_ids[micro.labels]
    sizes = np.bincount(labels, minlength=reps.size)
    members = [micro.centroids[chain_ids == c] for c in range(reps.size)]
    return Clustering(labels, micro.centroids[reps].copy(), sizes), members, stats


def canonical_labels(labels):
    """Relabel so ids appear in order of first occurrence.

    Two labelings describe the same partition iff their canonical forms are
    equal.
    """
    labels = np.asarray(labels)
    _, first, inverse = np.unique(labels, return_index=True, return_inverse=True)
    rank = np.empty(first.size, dtype=np.int64)
    rank[np.argsort(first, kind="stable")] = np.arange(first.size)
    return rank[inverse.ravel()]


def same_partition(labels_a, labels_b):
    a = np.asarray(labels_a)
    b = np.asarray(labels_b)
    return a.shape == b.shape and np.array_equal(canonical_labels(a), canonical_labels(b))
