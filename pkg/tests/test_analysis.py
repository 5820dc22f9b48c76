import numpy as np
import pytest

from thetaclust.analysis import (
    Sparsity,
    SweepResult,
    SweepRow,
    cluster_size_elbow,
    optimal_theta_ranges,
    sparsity_check,
    theta_sweep,
    top_m_clusters,
)
from thetaclust.datagen import certified_sparse_grid, gaussian_clusters
from thetaclust.metrics import nmi
from thetaclust.theta import tsg


class TestSweep:
    def test_extremes(self, rng):
        X = rng.uniform(0, 10, size=(40, 2))
        diffs = np.sqrt(((X[:, None] - X[None]) ** 2).sum(-1))
        below = diffs[np.triu_indices(40, 1)].min() / 2
        sweep = theta_sweep(X, [below, 100.0], 3, 0)
        assert sweep.k_found.tolist() == [40, 1]

    def test_nmi_recorded(self):
        X, truth, _ = certified_sparse_grid(2, 2, 10, 0.5, 20, 6.0, seed=0)
        sweep = theta_sweep(X, [6.0], 2, 0, ground_truth=truth)
        assert sweep.rows[0].nmi == 1.0 and sweep.rows[0].k_found == 4
        assert theta_sweep(X, [6.0], 2, 0, ground_truth=truth.labels).rows[0].nmi == 1.0

    def test_unsorted(self):
        with pytest.raises(ValueError):
            theta_sweep(np.zeros((3, 1)), [2.0, 1.0], 1, 0)


class TestRanges:
    def test_run_length(self):
        rows = [SweepRow(t, k) for t, k in zip([1, 2, 3, 4], [3, 2, 2, 1])]
        got = [(i.low, i.high) for i in optimal_theta_ranges(SweepResult(rows))]
        assert got == [(1, 1), (2, 3), (4, 4)]

    def test_constant(self):
        rows = [SweepRow(t, 5) for t in [0.5, 1.0, 1.5]]
        (interval,) = optimal_theta_ranges(SweepResult(rows))
        assert (interval.low, interval.high, interval.width) == (0.5, 1.5, 1.0)

    def test_target_filter(self):
        rows = [SweepRow(t, k) for t, k in zip(range(6), [4, 3, 3, 4, 4, 4])]
        got = optimal_theta_ranges(SweepResult(rows), target_k=4)
        assert [(i.low, i.high) for i in got] == [(0, 0), (3, 5)]

    def test_empty(self):
        with pytest.raises(ValueError):
            optimal_theta_ranges(SweepResult([]))


class TestElbow:
    def test_drop(self):
        assert cluster_size_elbow([100, 100, 100, 3, 2]) == (3, [100, 100, 100, 3, 2])

    def test_equal(self):
        assert cluster_size_elbow([7, 7, 7, 7])[0] == 4

    def test_single(self):
        assert cluster_size_elbow([42])[0] == 1

    def test_unsorted_input(self):
        assert cluster_size_elbow([2, 100, 3, 100])[0] == 2


class TestTopM:
    @staticmethod
    def blobs_with_outliers():
        X, labels = gaussian_clusters([[0, 0], [20, 0], [0, 20]], 0.5, 50, 0)
        outliers = np.array([[-8.0, 0], [28, 0], [0, 28], [20, 8], [-6, 24]])
        return np.vstack([X, outliers]), labels

    def test_recovers_blobs(self):
        X, labels = self.blobs_with_outliers()
        clustering, _ = tsg(X, 5.0)
        assert clustering.n_clusters == 8
        top = top_m_clusters(X, clustering, 3)
        assert top.n_clusters == 3
        assert nmi(top.labels[:150], labels) == 1.0
        assert top.sizes.sum() == X.shape[0]

    def test_m_equals_k(self):
        X, _ = self.blobs_with_outliers()
        clustering, _ = tsg(X, 5.0)
        top = top_m_clusters(X, clustering, clustering.n_clusters)
        for k in range(top.n_clusters):
            np.testing.assert_allclose(top.centroids[k], X[top.labels == k].mean(axis=0))

    def test_m_one(self, rng):
        X = rng.normal(size=(60, 2)) * 5
        clustering, _ = tsg(X, 2.0)
        top = top_m_clusters(X, clustering, 1)
        assert set(top.labels) == {0}
        np.testing.assert_allclose(top.centroids[0], X.mean(axis=0))

    def test_too_many(self, rng):
        clustering, _ = tsg(rng.normal(size=(10, 2)), 100.0)
        with pytest.raises(ValueError):
            top_m_clusters(np.zeros((10, 2)), clustering, 2)


class TestSparsity:
    def test_certified_fixture(self):
        X, _, _ = certified_sparse_grid(3, 3, 10, 0.5, 40, 6.0, seed=0)
        for repeats in (2, 20):
            verdict = sparsity_check(X, 6.0, repeats, 0)
            assert verdict.verdict is Sparsity.THETA_SPARSE_PROBABLE
            assert verdict.repeats_run == repeats

    def test_adversarial_pair(self):
        # a bridge sample at 4 joins whichever end it meets first
        X = np.array([[0.0], [0.2], [4.0], [7.8], [8.0]])
        hits = sum(sparsity_check(X, 5.0, 50, s).verdict is Sparsity.THETA_DENSE for s in range(20))
        assert hits == 20

    def test_repeats_validated(self):
        with pytest.raises(ValueError):
            sparsity_check(np.zeros((3, 1)), 1.0, 1, 0)
