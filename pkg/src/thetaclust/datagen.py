"""Seeded synthetic benchmarks and dataset file I/O.

File formats
------------
Data files are UTF-8 text with one sample per line and features separated
by whitespace or commas. Label files hold one integer per line. Files in
the partition format used by the S-sets (a header closed by a line of
dashes, then one label per line) are also accepted by
:func:`load_labels`. Lines that are empty or start with ``#`` are skipped.
"""
import os
import re
import tempfile
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .core import check_data, check_positive_int, check_seed, mix_seed, normal_stream, uniform_stream

PRECISION = 17  # significant digits; enough for an exact float64 round trip


@dataclass
class GroundTruth:
    labels: np.ndarray
    true_centroids: np.ndarray
    separation: float
    sigma: float

    @property
    def n_clusters(self):
        return int(self.true_centroids.shape[0])


def _check_positive(value, name):
    value = float(value)
    if not np.isfinite(value) or value <= 0:
        raise ValueError(f"{name} must be a positive finite number, got {value}")
    return value


def _cluster_counts(points_per_cluster, k):
    if np.ndim(points_per_cluster) == 0:
        counts = [check_positive_int(points_per_cluster, "points_per_cluster")] * k
    else:
        counts = [check_positive_int(c, "points_per_cluster entry") for c in points_per_cluster]
        if len(counts) != k:
            raise ValueError(f"points_per_cluster has {len(counts)} entries for {k} clusters")
    return counts


def gaussian_clusters(means, sigma, points_per_cluster, seed):
    """Isotropic normal samples around each row of ``means``.

    Cluster ``k`` draws its noise from the stream seeded with
    ``mix_seed(seed, k)``, so one cluster's samples do not depend on the
    sizes of the others. Samples are stored cluster by cluster.
    """
    means = np.asarray(means, dtype=np.float64)
    sigma = _check_positive(sigma, "sigma")
    seed = check_seed(seed)
    counts = _cluster_counts(points_per_cluster, means.shape[0])
    d = means.shape[1]
    blocks = []
    for k, (mean, count) in enumerate(zip(means, counts)):
        noise = normal_stream(mix_seed(seed, k), count * d).reshape(count, d)
        blocks.append(mean + sigma * noise)
    X = np.vstack(blocks)
    labels = np.repeat(np.arange(means.shape[0]), counts)
    return X, labels


def grid_blobs(rows, cols, separation, sigma, points_per_cluster, seed):
    """Normal blobs centered on a ``rows x cols`` grid with spacing
    ``separation``; cluster ``i * cols + j`` sits at
    ``(i * separation, j * separation)``.

    ``points_per_cluster`` may be a list (one count per cluster) to build
    imbalanced datasets.
    """
    rows = check_positive_int(rows, "rows")
    cols = check_positive_int(cols, "cols")
    separation = _check_positive(separation, "separation")
    ii, jj = np.meshgrid(np.arange(rows), np.arange(cols), indexing="ij")
    means = np.column_stack([ii.ravel(), jj.ravel()]).astype(np.float64) * separation
    X, labels = gaussian_clusters(means, sigma, points_per_cluster, seed)
    return X, GroundTruth(labels, means, separation, float(sigma))


def highdim_blobs(k, d, per_coord_offset, sigma, points_per_cluster, seed):
    """``k`` normal blobs in ``d`` dimensions along the main diagonal.

    The mean of cluster ``m`` is ``m * per_coord_offset`` in every
    coordinate, so consecutive means are ``per_coord_offset * d`` apart in
    Manhattan distance and ``per_coord_offset * sqrt(d)`` in Euclidean.
    The recorded ``separation`` is the Euclidean one.
    """
    k = check_positive_int(k, "k")
    d = check_positive_int(d, "d")
    offset = _check_positive(per_coord_offset, "per_coord_offset")
    means = np.repeat(np.arange(k, dtype=np.float64)[:, None] * offset, d, axis=1)
    X, labels = gaussian_clusters(means, sigma, points_per_cluster, seed)
    return X, GroundTruth(labels, means, offset * np.sqrt(d), float(sigma))


def concentric_rings(radii, points_per_ring, noise, seed):
    """Noisy 2-D rings centered at the origin, one label per ring.

    Angles are uniform and both coordinates get normal noise of standard
    deviation ``noise``. Ring ``r`` uses the streams ``mix_seed(seed, 2r)``
    (angles) and ``mix_seed(seed, 2r + 1)`` (noise).
    """
    noise = _check_positive(noise, "noise")
    counts = _cluster_counts(points_per_ring, len(radii))
    blocks = []
    for r, (radius, count) in enumerate(zip(radii, counts)):
        radius = _check_positive(radius, "radius")
        angle = 2.0 * np.pi * uniform_stream(mix_seed(seed, 2 * r), count)
        jitter = normal_stream(mix_seed(seed, 2 * r + 1), 2 * count).reshape(count, 2)
        blocks.append(radius * np.column_stack([np.cos(angle), np.sin(angle)]) + noise * jitter)
    labels = np.repeat(np.arange(len(radii)), counts)
    return np.vstack(blocks), labels


def min_intercluster_distance(X, labels):
    """Brute-force smallest distance between samples of different clusters.

    Returns ``inf`` for a single cluster.
    """
    X = check_data(X)
    labels = np.asarray(labels)
    best = np.inf
    for c in np.unique(labels):
        inside = X[labels == c]
        outside = X[labels > c]
        if outside.shape[0] == 0:
            continue
        for start in range(0, inside.shape[0], 256):
            block = inside[start : start + 256]
            diff = block[:, None, :] - outside[None, :, :]
            best = min(best, float(np.sqrt(np.einsum("ijk,ijk->ij", diff, diff).min())))
    return best


def is_theta_sparse(X, labels, theta):
    """True when every pair of samples from different clusters is more
    than ``theta`` apart."""
    return min_intercluster_distance(X, labels) > theta


def certified_sparse_grid(rows, cols, separation, sigma, points_per_cluster, theta, seed, max_tries=100):
    """First grid dataset, trying seeds ``seed, seed + 1, ...``, whose
    clusters are certified ``theta``-sparse by brute force.

    Returns
    -------
    X, truth, used_seed
    """
    for attempt in range(max_tries):
        used = check_seed(seed + attempt)
        X, truth = grid_blobs(rows, cols, separation, sigma, points_per_cluster, used)
        if is_theta_sparse(X, truth.labels, theta):
            return X, truth, used
    raise RuntimeError(f"no theta-sparse dataset found in {max_tries} seeds starting at {seed}")


def _atomic_write(path, text):
    path = Path(path)
    fd, tmp = tempfile.mkstemp(dir=path.parent or ".", prefix=path.name + ".", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def format_matrix(X):
    return "".join(" ".join(f"{v:.{PRECISION}g}" for v in row) + "\n" for row in np.asarray(X))


def write_matrix(X, path):
    _atomic_write(path, format_matrix(X))


def write_labels(labels, path):
    _atomic_write(path, "".join(f"{int(v)}\n" for v in np.asarray(labels)))


def write_dataset(X, truth, path_prefix):
    """Write ``<prefix>.data``, and with ground truth also
    ``<prefix>.labels`` and ``<prefix>.centroids``.

    Returns the list of written paths.
    """
    prefix = str(path_prefix)
    X = check_data(X)
    paths = [Path(prefix + ".data")]
    write_matrix(X, paths[0])
    if truth is not None:
        paths.append(Path(prefix + ".labels"))
        write_labels(truth.labels, paths[1])
        paths.append(Path(prefix + ".centroids"))
        write_matrix(truth.true_centroids, paths[2])
    return paths


_SPLIT = re.compile(r"[\s,]+")


def _content_lines(path):
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            stripped = line.strip()
            if stripped and not stripped.startswith("#"):
                yield lineno, stripped


def load_matrix(path):
    """Read a data file into a float matrix.

    Raises
    ------
    ValueError
        On a non-numeric token, a non-finite value or a row whose width
        differs from the first row; the message names the line.
    """
    rows = []
    width = None
    for lineno, line in _content_lines(path):
        tokens = [t for t in _SPLIT.split(line) if t]
        try:
            row = [float(t) for t in tokens]
        except ValueError:
            bad = next(t for t in tokens if not _is_float(t))
            raise ValueError(f"{path}:{lineno}: non-numeric token {bad!r}") from None
        if not all(np.isfinite(row)):
            raise ValueError(f"{path}:{lineno}: non-finite value")
        if width is None:
            width = len(row)
        elif len(row) != width:
            raise ValueError(f"{path}:{lineno}: expected {width} values, found {len(row)}")
        rows.append(row)
    if not rows:
        raise ValueError(f"{path}: no data rows")
    return np.array(rows, dtype=np.float64)


def _is_float(token):
    try:
        float(token)
    except ValueError:
        return False
    return True


def load_labels(path):
    """Read one integer label per line.

    A leading header terminated by a line made only of dashes (the
    partition-file layout of the S-sets) is skipped.
    """
    lines = list(_content_lines(path))
    for idx, (_, line) in enumerate(lines):
        if set(line) == {"-"}:
            lines = lines[idx + 1 :]
            break
    labels = []
    for lineno, line in lines:
        try:
            labels.append(int(line))
        except ValueError:
            raise ValueError(f"{path}:{lineno}: expected an integer label, found {line!r}") from None
    if not labels:
        raise ValueError(f"{path}: no labels")
    return np.array(labels, dtype=np.int64)


def load_sset(path, labels_path=None):
    """Load an S-set style data file and, optionally, its label file.

    Returns
    -------
    X : ndarray
    labels : ndarray or None
    """
    X = load_matrix(path)
    labels = None
    if labels_path is not None:
        labels = load_labels(labels_path)
        if labels.shape[0] != X.shape[0]:
            raise ValueError(
                f"{labels_path} has {labels.shape[0]} labels but {path} has {X.shape[0]} samples"
            )
    return X, labels


def sset_dir():
    """Directory holding S1-S4 files, from ``THETACLUST_SSETS_DIR``."""
    value = os.environ.get("THETACLUST_SSETS_DIR")
    return Path(value) if value else None
