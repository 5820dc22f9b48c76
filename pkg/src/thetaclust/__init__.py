"""Distance-threshold clustering (TSG, TDG, TNC) with k-means baselines,
quality metrics, synthetic benchmarks and analysis tools."""
from .analysis import (
    SweepResult,
    cluster_size_elbow,
    optimal_theta_ranges,
    sparsity_check,
    theta_sweep,
    top_m_clusters,
)
from .baselines import KMeansConfig, kmeans, kmeanspp_init, lloyd
from .core import Metric, distance, mix_seed, running_mean_update, seeded_permutation
from .estimators import KMeans, ThetaDenseGrouping, ThetaNonlinearChaining, ThetaSparseGrouping
from .metrics import inertia, nmi, ssd_centroid_score
from .theta import (
    Clustering,
    RunStats,
    ThetaParams,
    assign_to_centroids,
    chain_merge,
    tdg,
    tnc,
    tsg,
)

__version__ = "0.1.0"

__all__ = [
    "Clustering",
    "KMeans",
    "KMeansConfig",
    "Metric",
    "RunStats",
    "SweepResult",
    "ThetaDenseGrouping",
    "ThetaNonlinearChaining",
    "ThetaParams",
    "ThetaSparseGrouping",
    "assign_to_centroids",
    "chain_merge",
    "cluster_size_elbow",
    "distance",
    "inertia",
    "kmeans",
    "kmeanspp_init",
    "lloyd",
    "mix_seed",
    "nmi",
    "optimal_theta_ranges",
    "running_mean_update",
    "seeded_permutation",
    "sparsity_check",
    "ssd_centroid_score",
    "tdg",
    "theta_sweep",
    "tnc",
    "top_m_clusters",
    "tsg",
]
