"""Clustering quality scores."""
import heapq
import math

import numpy as np

from .core import check_data, check_metric, check_nonnegative


class ContingencyTable:
    """Counts of samples shared by each pair of clusters from two labelings.

    ``counts[r, s]`` is the number of samples labeled ``r``-th distinct value
    in ``labels_a`` and ``s``-th distinct value in ``labels_b``.
    """

    def __init__(self, labels_a, labels_b):
        a = np.asarray(labels_a).ravel()
        b = np.asarray(labels_b).ravel()
        if a.shape[0] != b.shape[0]:
            raise ValueError(f"length mismatch: {a.shape[0]} labels vs {b.shape[0]} labels")
        if a.shape[0] == 0:
            raise ValueError("labelings must be non-empty")
        _, ia = np.unique(a, return_inverse=True)
        _, ib = np.unique(b, return_inverse=True)
        ia = ia.ravel()
        ib = ib.ravel()
        self.counts = np.zeros((ia.max() + 1, ib.max() + 1), dtype=np.int64)
        np.add.at(self.counts, (ia, ib), 1)
        self.row_sums = self.counts.sum(axis=1)
        self.col_sums = self.counts.sum(axis=0)
        self.n = int(a.shape[0])


def _entropy(marginal, n):
    p = marginal[marginal > 0] / n
    # fsum is correctly rounded, so the value cannot depend on label order
    return -math.fsum(p * np.log(p))


def nmi(labels_a, labels_b):
    """Normalized mutual information with arithmetic-mean normalization.

    ``I(A; B) / ((H(A) + H(B)) / 2)`` using natural logarithms. Two
    constant labelings score 1.0; a constant labeling against a
    non-constant one scores 0.0.
    """
    table = ContingencyTable(labels_a, labels_b)
    n = table.n
    h_a = _entropy(table.row_sums, n)
    h_b = _entropy(table.col_sums, n)
    if h_a == 0.0 and h_b == 0.0:
        return 1.0
    if h_a == 0.0 or h_b == 0.0:
        return 0.0
    rows, cols = np.nonzero(table.counts)
    if rows.size == table.counts.shape[0] == table.counts.shape[1]:
        # one non-zero cell per row and column: identical partitions
        return 1.0
    nij = table.counts[rows, cols].astype(np.float64)
    outer = table.row_sums[rows].astype(np.float64) * table.col_sums[cols]
    mi = math.fsum(nij / n * (np.log(nij) + np.log(n) - np.log(outer)))
    return min(max(mi, 0.0) / ((h_a + h_b) / 2.0), 1.0)


def ssd_centroid_score(predicted, truth, tol):
    """Percentage of ground-truth centroids recovered within ``tol``.

    Pairs are matched greedily one-to-one: the globally closest remaining
    (truth, predicted) pair by squared distance is matched first. A truth
    centroid counts as identified when its match lies within ``tol``.
    Equal distances are broken by truth index, then predicted index.
    """
    predicted = check_data(predicted, "predicted")
    truth = check_data(truth, "truth")
    tol = check_nonnegative(tol, "tol")
    if predicted.shape[1] != truth.shape[1]:
        raise ValueError(
            f"dimension mismatch: predicted has {predicted.shape[1]} features, truth has {truth.shape[1]}"
        )
    diff = truth[:, None, :] - predicted[None, :, :]
    d2 = np.einsum("ijk,ijk->ij", diff, diff)
    heap = [(d2[t, p], t, p) for t in range(d2.shape[0]) for p in range(d2.shape[1])]
    heapq.heapify(heap)
    used_t, used_p = set(), set()
    identified = 0
    tol2 = tol * tol
    while heap and len(used_t) < d2.shape[0] and len(used_p) < d2.shape[1]:
        dist2, t, p = heapq.heappop(heap)
        if t in used_t or p in used_p:
            continue
        used_t.add(t)
        used_p.add(p)
        if dist2 <= tol2:
            identified += 1
    return 100.0 * identified / truth.shape[0]


def inertia(X, clustering, metric="euclidean"):
    """Sum of squared distances from each sample to its cluster centroid."""
    check_metric(metric)
    X = check_data(X)
    labels = np.asarray(clustering.labels)
    centroids = np.asarray(clustering.centroids, dtype=np.float64)
    if labels.shape != (X.shape[0],):
        raise ValueError(f"expected {X.shape[0]} labels, got shape {labels.shape}")
    if labels.size and (labels.min() < 0 or labels.max() >= centroids.shape[0]):
        raise ValueError(
            f"labels must lie in [0, {centroids.shape[0]}), got range [{labels.min()}, {labels.max()}]"
        )
    diff = X - centroids[labels]
    return float(np.einsum("ij,ij->", diff, diff))
