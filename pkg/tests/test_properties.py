"""Randomized invariant suites, 1000 cases per property."""
import numpy as np
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from thetaclust.baselines import KMeansConfig, kmeans, kmeanspp_init, lloyd
from thetaclust.core import running_mean_update, seeded_permutation
from thetaclust.metrics import inertia, nmi
from thetaclust.theta import ThetaParams, chain_merge, same_partition, tdg, tnc, tsg

from test_theta import bfs_components, reference_tsg

CASES = settings(max_examples=1000, deadline=None)

coords = st.floats(-50, 50, allow_nan=False, width=64)
data = st.tuples(st.integers(1, 40), st.integers(1, 3)).flatmap(lambda s: arrays(np.float64, s, elements=coords))
thetas = st.floats(0, 30, allow_nan=False)
seeds = st.integers(0, 2**64 - 1)
labelings = st.integers(2, 60).flatmap(
    lambda n: st.tuples(st.lists(st.integers(0, 5), min_size=n, max_size=n), st.lists(st.integers(0, 5), min_size=n, max_size=n))
)


def assert_valid_partition(clustering, n, nonempty=True):
    labels, sizes = clustering.labels, clustering.sizes
    assert labels.shape == (n,)
    assert labels.min() >= 0 and labels.max() < clustering.n_clusters
    assert clustering.centroids.shape[0] == clustering.n_clusters == sizes.size
    assert np.array_equal(np.bincount(labels, minlength=sizes.size), sizes)
    if nonempty:
        assert sizes.min() >= 1


@CASES
@given(data, thetas)
def test_tsg_partition_and_reference(X, theta):
    clustering, stats = tsg(X, theta)
    assert_valid_partition(clustering, X.shape[0])
    labels, centroids, counts, evals, inserted, founded = reference_tsg(X, theta)
    assert clustering.labels.tolist() == labels
    assert np.array_equal(clustering.centroids, centroids)
    assert stats.distance_evaluations == evals
    assert all(d <= theta for d in inserted)
    assert all(d > theta for dists in founded for d in dists)


@CASES
@given(data, thetas, st.integers(1, 4), seeds)
def test_tdg_partition_and_determinism(X, theta, iterations, seed):
    a, stats = tdg(X, theta, iterations, seed)
    assert_valid_partition(a, X.shape[0])
    for k in range(a.n_clusters):
        np.testing.assert_allclose(a.centroids[k], X[a.labels == k].mean(axis=0), rtol=1e-12, atol=1e-12)
    b, _ = tdg(X, theta, iterations, seed)
    assert np.array_equal(a.labels, b.labels) and np.array_equal(a.centroids, b.centroids)
    assert stats.shuffles_performed == iterations


@CASES
@given(data, thetas, st.floats(0, 40, allow_nan=False), seeds)
def test_tnc_partition_coarsens_tdg(X, theta, epsilon, seed):
    clustering, members, _ = tnc(X, ThetaParams(theta, 2, epsilon), seed)
    assert_valid_partition(clustering, X.shape[0])
    micro, _ = tdg(X, theta, 2, seed)
    # every micro-cluster lands inside exactly one chained cluster
    for k in range(micro.n_clusters):
        assert np.unique(clustering.labels[micro.labels == k]).size == 1
    assert sum(m.shape[0] for m in members) == micro.n_clusters


@CASES
@given(st.integers(1, 30).flatmap(lambda k: arrays(np.float64, (k, 2), elements=st.floats(0, 10))), st.floats(0, 5))
def test_chain_merge_matches_bfs(C, epsilon):
    assert chain_merge(C, epsilon).tolist() == bfs_components(C, epsilon)


@CASES
@given(data, st.integers(1, 5), seeds, st.integers(1, 3))
def test_kmeans_partition_and_determinism(X, k, seed, n_init):
    k = min(k, X.shape[0])
    config = KMeansConfig(k, n_init=n_init, max_iter=50, seed=seed)
    a, _ = kmeans(X, config)
    assert_valid_partition(a, X.shape[0], nonempty=False)
    b, _ = kmeans(X, config)
    assert np.array_equal(a.labels, b.labels) and np.array_equal(a.centroids, b.centroids)


@CASES
@given(data, st.integers(1, 5), seeds)
def test_lloyd_inertia_monotone(X, k, seed):
    k = min(k, X.shape[0])
    result = lloyd(X, kmeanspp_init(X, k, seed), max_iter=50, tol=0.0)
    history = result.inertia_history
    scale = max(history[0], 1.0)
    for before, after in zip(history, history[1:]):
        assert after <= before + 1e-10 * scale
    assert result.inertia == history[-1]
    assert abs(result.inertia - inertia(X, result.clustering)) <= 1e-9 * scale


@CASES
@given(labelings, st.randoms(use_true_random=False))
def test_nmi_symmetry_range_invariance(pair, rnd):
    a, b = (np.array(x) for x in pair)
    value = nmi(a, b)
    assert 0.0 <= value <= 1.0
    assert nmi(b, a) == value
    # renaming clusters and permuting samples leave the score unchanged
    rename = np.array(rnd.sample(range(6), 6))
    order = np.array(rnd.sample(range(a.size), a.size))
    assert nmi(rename[a], b) == value
    assert nmi(a[order], b[order]) == value
    assert nmi(a, a) == 1.0


@CASES
@given(st.integers(1, 3).flatmap(lambda d: arrays(np.float64, st.tuples(st.integers(1, 60), st.just(d)), elements=coords)))
def test_incremental_mean_equals_batch(points):
    centroid, count = points[0], 1
    for p in points[1:]:
        centroid, count = running_mean_update(centroid, count, p)
    assert count == points.shape[0]
    np.testing.assert_allclose(centroid, points.mean(axis=0), rtol=1e-9, atol=1e-9)


@CASES
@given(st.integers(1, 200), seeds)
def test_permutation_determinism(n, seed):
    perm = seeded_permutation(n, seed)
    assert np.array_equal(np.sort(perm), np.arange(n))
    assert np.array_equal(perm, seeded_permutation(n, seed))


@CASES
@given(labelings)
def test_same_partition_matches_nmi(pair):
    a, b = (np.array(x) for x in pair)
    assert same_partition(a, b) == (nmi(a, b) == 1.0 and np.unique(a).size == np.unique(b).size)
