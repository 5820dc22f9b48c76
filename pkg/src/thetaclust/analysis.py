"""Tools built on top of the threshold algorithms: threshold sweeps and
their plateaus, cluster-size elbows, top-m selection and ordering-based
sparsity probes."""
import time
from dataclasses import dataclass, field
from enum import Enum

import numpy as np

from . import _kernels
from .core import check_data, check_nonnegative, check_positive_int, check_seed, mix_seed, seeded_permutation
from .metrics import nmi
from .theta import Clustering, _tsg, same_partition, tdg


@dataclass
class SweepRow:
    theta: float
    k_found: int
    nmi: float = None
    wall_time: float = 0.0


@dataclass
class SweepResult:
    rows: list = field(default_factory=list)

    @property
    def thetas(self):
        return np.array([r.theta for r in self.rows])

    @property
    def k_found(self):
        return np.array([r.k_found for r in self.rows])


def theta_sweep(X, thetas, iterations, seed, ground_truth=None):
    """Run TDG once per threshold with the same seed.

    ``ground_truth`` may be a :class:`~thetaclust.datagen.GroundTruth` or a
    label array; when given, each row records the NMI against it.
    """
    X = check_data(X)
    thetas = [check_nonnegative(t, "theta") for t in thetas]
    if not thetas:
        raise ValueError("thetas must be non-empty")
    if any(b <= a for a, b in zip(thetas, thetas[1:])):
        raise ValueError("thetas must be strictly increasing")
    truth = getattr(ground_truth, "labels", ground_truth)
    result = SweepResult()
    for theta in thetas:
        start = time.perf_counter()
        clustering, _ = tdg(X, theta, iterations, seed)
        elapsed = time.perf_counter() - start
        score = nmi(clustering.labels, truth) if truth is not None else None
        result.rows.append(SweepRow(theta, clustering.n_clusters, score, elapsed))
    return result


@dataclass
class ThetaInterval:
    low: float
    high: float
    k_found: int

    @property
    def width(self):
        return self.high - self.low


def optimal_theta_ranges(sweep, target_k=None):
    """Maximal runs of consecutive sweep rows with the same cluster count.

    Each run becomes a closed interval ``[first theta, last theta]``.

    >>> rows = [SweepRow(t, k) for t, k in zip([1, 2, 3, 4], [3, 2, 2, 1])]
    >>> [(i.low, i.high, i.k_found) for i in optimal_theta_ranges(SweepResult(rows))]
    [(1, 1, 3), (2, 3, 2), (4, 4, 1)]
    """
    if not sweep.rows:
        raise ValueError("sweep has no rows")
    intervals = []
    for row in sweep.rows:
        if intervals and intervals[-1].k_found == row.k_found:
            intervals[-1].high = row.theta
        else:
            intervals.append(ThetaInterval(row.theta, row.theta, row.k_found))
    if target_k is not None:
        intervals = [i for i in intervals if i.k_found == target_k]
    return intervals


def cluster_size_elbow(clustering):
    """Estimate the cluster count from the largest relative drop in the
    sorted cluster sizes.

    Sizes are sorted in descending order and the estimate is ``i + 1`` for
    the ``i`` maximizing ``sizes[i] / sizes[i + 1]``. Ties go to the last
    such ``i``, so equal sizes give back ``K``.

    Returns
    -------
    estimated_k : int
    sorted_sizes : list of int
    """
    sizes = np.asarray(getattr(clustering, "sizes", clustering))
    sorted_sizes = sorted((int(s) for s in sizes), reverse=True)
    if len(sorted_sizes) <= 1:
        return len(sorted_sizes) or 1, sorted_sizes
    ratios = np.array(sorted_sizes[:-1], dtype=np.float64) / np.array(sorted_sizes[1:])
    peak = ratios.max()
    if peak <= 1.0:
        return len(sorted_sizes), sorted_sizes
    last = int(np.flatnonzero(ratios == peak)[-1])
    return last + 1, sorted_sizes


def top_m_clusters(X, clustering, m):
    """Keep the ``m`` most populated clusters and reassign every sample to
    the nearest kept centroid; kept centroids are then recomputed as the
    means of their samples.

    Size ties are broken by the lower original cluster id, and kept
    clusters retain their original relative order.
    """
    X = check_data(X)
    m = check_positive_int(m, "m")
    sizes = np.asarray(clustering.sizes)
    if m > sizes.size:
        raise ValueError(f"m={m} exceeds the number of clusters {sizes.size}")
    ranked = np.lexsort((np.arange(sizes.size), -sizes))
    keep = np.sort(ranked[:m])
    centroids = np.ascontiguousarray(np.asarray(clustering.centroids, dtype=np.float64)[keep])
    labels, _ = _kernels.nearest_kernel(X, centroids)
    counts = np.bincount(labels, minlength=m)
    sums = np.zeros_like(centroids)
    np.add.at(sums, labels, X)
    filled = counts > 0
    # a kept centroid that loses all its samples to other kept centroids
    # stays where it was, with size 0
    centroids[filled] = sums[filled] / counts[filled, None]
    return Clustering(labels, centroids, counts)


class Sparsity(str, Enum):
    THETA_SPARSE_PROBABLE = "theta_sparse_probable"
    THETA_DENSE = "theta_dense"


@dataclass
class SparsityVerdict:
    verdict: Sparsity
    repeats_run: int
    first_disagreement: int = None


def sparsity_check(X, theta, repeats, seed):
    """Probe whether ``X`` is ``theta``-sparse by repeating TSG under
    seeded random orderings.

    Repeat ``r`` visits the samples in ``seeded_permutation(N, mix_seed(
    seed, r))``. The first repeat whose partition differs from repeat 0
    makes the data ``theta``-dense; agreement across all repeats is
    evidence, not proof, of sparsity.
    """
    X = check_data(X)
    theta = check_nonnegative(theta, "theta")
    repeats = check_positive_int(repeats, "repeats")
    if repeats < 2:
        raise ValueError(f"repeats must be >= 2, got {repeats}")
    seed = check_seed(seed)
    n = X.shape[0]
    reference = None
    for r in range(repeats):
        order = seeded_permutation(n, mix_seed(seed, r))
        run, _ = _tsg(X, theta, order, False)
        if reference is None:
            reference = run.labels
        elif not same_partition(reference, run.labels):
            return SparsityVerdict(Sparsity.THETA_DENSE, r + 1, r)
    return SparsityVerdict(Sparsity.THETA_SPARSE_PROBABLE, repeats, None)
