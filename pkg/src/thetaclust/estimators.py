"""scikit-learn compatible estimators around the functional API.

All estimators follow the usual conventions: hyper-parameters are stored
untouched by ``__init__``, ``fit`` sets trailing-underscore attributes and
returns ``self``, and ``get_params``/``set_params``/``clone`` work.
"""
import numpy as np
from sklearn.base import BaseEstimator, ClusterMixin
from sklearn.utils.validation import check_is_fitted

from .baselines import KMeansConfig
from .baselines import kmeans as _kmeans
from .core import check_data
from .theta import ThetaParams, assign_to_centroids, tdg, tnc, tsg


class _ThetaBase(ClusterMixin, BaseEstimator):
    def _store(self, X, clustering, stats):
        self.labels_ = clustering.labels
        self.cluster_centers_ = clustering.centroids
        self.cluster_sizes_ = clustering.sizes
        self.n_clusters_ = clustering.n_clusters
        self.run_stats_ = stats
        self.n_features_in_ = X.shape[1]
        return self

    def _check_predict_input(self, X):
        check_is_fitted(self, "cluster_centers_")
        X = check_data(X)
        if X.shape[1] != self.n_features_in_:
            raise ValueError(f"X has {X.shape[1]} features, the model was fitted with {self.n_features_in_}")
        return X

    def predict(self, X):
        """Nearest fitted centroid of each sample (no threshold)."""
        X = self._check_predict_input(X)
        return assign_to_centroids(X, self.cluster_centers_, self.metric)


class ThetaSparseGrouping(_ThetaBase):
    """Single-pass threshold clustering (TSG).

    Parameters
    ----------
    theta : float, default=1.0
        A sample joins the nearest cluster whose centroid is within
        ``theta``; otherwise it starts a new cluster.
    centroid_update : {"running_mean", "frozen"}, default="running_mean"
    metric : str, default="euclidean"

    Attributes
    ----------
    labels_, cluster_centers_, cluster_sizes_, n_clusters_
    run_stats_ : RunStats
    """

    def __init__(self, theta=1.0, centroid_update="running_mean", metric="euclidean"):
        self.theta = theta
        self.centroid_update = centroid_update
        self.metric = metric

    def fit(self, X, y=None):
        X = check_data(X)
        clustering, stats = tsg(X, self.theta, self.metric, centroid_update=self.centroid_update)
        return self._store(X, clustering, stats)


class ThetaDenseGrouping(_ThetaBase):
    """Threshold clustering robust to sample ordering (TDG).

    Runs TSG on ``n_iter`` seeded shuffles, clusters the pooled centroids
    with TSG, and assigns each sample to its nearest resulting centroid.

    Parameters
    ----------
    theta : float, default=1.0
    n_iter : int, default=10
        Number of shuffled TSG runs.
    random_state : int, default=0
        64-bit seed for the shuffles.
    centroid_update : {"running_mean", "frozen"}, default="running_mean"
    metric : str, default="euclidean"
    """

    def __init__(self, theta=1.0, n_iter=10, random_state=0, centroid_update="running_mean", metric="euclidean"):
        self.theta = theta
        self.n_iter = n_iter
        self.random_state = random_state
        self.centroid_update = centroid_update
        self.metric = metric

    def fit(self, X, y=None):
        X = check_data(X)
        clustering, stats = tdg(
            X, self.theta, self.n_iter, self.random_state, self.metric, centroid_update=self.centroid_update
        )
        return self._store(X, clustering, stats)


class ThetaNonlinearChaining(_ThetaBase):
    """TDG micro-clusters chained into arbitrarily shaped clusters (TNC).

    Micro-clusters whose centroids are closer than ``epsilon`` end up in
    the same cluster, transitively. ``cluster_members_[k]`` holds all
    micro-centroids of cluster ``k`` and ``predict`` assigns a sample to
    the cluster owning its nearest micro-centroid.
    """

    def __init__(
        self,
        theta=1.0,
        epsilon=0.0,
        n_iter=10,
        random_state=0,
        max_chain_rounds=100,
        centroid_update="running_mean",
        metric="euclidean",
    ):
        self.theta = theta
        self.epsilon = epsilon
        self.n_iter = n_iter
        self.random_state = random_state
        self.max_chain_rounds = max_chain_rounds
        self.centroid_update = centroid_update
        self.metric = metric

    def fit(self, X, y=None):
        X = check_data(X)
        params = ThetaParams(
            self.theta, self.n_iter, self.epsilon, self.max_chain_rounds, self.centroid_update
        )
        clustering, members, stats = tnc(X, params, self.random_state, self.metric)
        self.cluster_members_ = members
        return self._store(X, clustering, stats)

    def predict(self, X):
        X = self._check_predict_input(X)
        micro = np.vstack(self.cluster_members_)
        owner = np.repeat(np.arange(len(self.cluster_members_)), [m.shape[0] for m in self.cluster_members_])
        return owner[assign_to_centroids(X, micro, self.metric)]


class KMeans(_ThetaBase):
    """Lloyd k-means with k-means++ seeding and ``n_init`` seeded restarts."""

    def __init__(self, n_clusters=8, n_init=10, max_iter=300, tol=1e-4, random_state=0, metric="euclidean"):
        self.n_clusters = n_clusters
        self.n_init = n_init
        self.max_iter = max_iter
        self.tol = tol
        self.random_state = random_state
        self.metric = metric

    def fit(self, X, y=None):
        X = check_data(X)
        config = KMeansConfig(self.n_clusters, self.n_init, self.max_iter, self.tol, self.random_state)
        clustering, stats = _kmeans(X, config, self.metric)
        return self._store(X, clustering, stats)
