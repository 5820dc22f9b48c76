"""Numeric primitives: input validation, the metric, seeded randomness and
incremental means.

Randomness
----------
Every stochastic routine in the package draws from SplitMix64 (Steele,
Lea & Flood 2014). The generator state starts at the seed; each draw adds
the golden-ratio increment ``0x9E3779B97F4A7C15`` (mod 2**64) and returns
the finalizer of the new state. Because SplitMix64 is counter based, the
i-th output of a stream seeded with ``s`` is ``mix(s + (i + 1) * GAMMA)``;
:func:`mix_seed` uses exactly that as the sub-seed for iteration ``i``.

* bounded integers in ``[0, b)`` use rejection of draws below
  ``2**64 mod b`` followed by ``r mod b``;
* uniform floats in ``[0, 1)`` are ``(r >> 11) * 2**-53``;
* normal deviates use Box-Muller on consecutive uniform pairs
  ``(u1, u2)`` with radius ``sqrt(-2 log(1 - u1))`` and outputs
  ``(r cos 2 pi u2, r sin 2 pi u2)`` in that order.
"""
from enum import Enum

import numpy as np

from . import _kernels

UINT64_MAX = 2**64 - 1
_GAMMA = 0x9E3779B97F4A7C15
_MASK = UINT64_MAX


class Metric(str, Enum):
    """Distance used by every algorithm. Only Euclidean is implemented."""

    EUCLIDEAN = "euclidean"


def check_metric(metric):
    try:
        return Metric(metric)
    except ValueError:
        valid = ", ".join(m.value for m in Metric)
        raise ValueError(f"unknown metric {metric!r}; valid metrics: {valid}") from None


def check_data(X, name="X"):
    """Validate a data matrix and return it as C-contiguous float64.

    Parameters
    ----------
    X : array-like of shape (n_samples, n_features)
    name : str
        Used in error messages.

    Raises
    ------
    ValueError
        If ``X`` is not two dimensional, is empty, or holds a non-finite
        entry. The message names the first offending row and column.
    """
    try:
        arr = np.asarray(X, dtype=np.float64)
    except (TypeError, ValueError) as exc:
        raise ValueError(f"{name} could not be converted to a float matrix: {exc}") from None
    if arr.ndim == 1:
        raise ValueError(
            f"{name} must be 2-D, got a 1-D array of length {arr.shape[0]}; "
            "use X.reshape(-1, 1) for a single feature"
        )
    if arr.ndim != 2:
        raise ValueError(f"{name} must be 2-D, got {arr.ndim} dimensions")
    if arr.shape[0] < 1 or arr.shape[1] < 1:
        raise ValueError(f"{name} must have at least one sample and one feature, got shape {arr.shape}")
    bad = ~np.isfinite(arr)
    if bad.any():
        row, col = np.argwhere(bad)[0]
        raise ValueError(f"{name} has a non-finite value {arr[row, col]} at row {row}, column {col}")
    return np.ascontiguousarray(arr)


def check_seed(seed):
    """Return ``seed`` as a Python int in ``[0, 2**64)``."""
    if isinstance(seed, (bool, np.bool_)) or not isinstance(seed, (int, np.integer)):
        raise TypeError(f"seed must be an integer, got {type(seed).__name__}")
    seed = int(seed)
    if not 0 <= seed <= UINT64_MAX:
        raise ValueError(f"seed must lie in [0, 2**64), got {seed}")
    return seed


def check_nonnegative(value, name):
    value = float(value)
    if not np.isfinite(value) and value != np.inf:
        raise ValueError(f"{name} must be a non-negative number, got {value}")
    if value < 0:
        raise ValueError(f"{name} must be >= 0, got {value}")
    return value


def check_positive_int(value, name):
    if isinstance(value, (bool, np.bool_)) or not isinstance(value, (int, np.integer)):
        raise TypeError(f"{name} must be an integer, got {type(value).__name__}")
    if value < 1:
        raise ValueError(f"{name} must be >= 1, got {value}")
    return int(value)


def _mix(z):
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK
    return z ^ (z >> 31)


def mix_seed(seed, index):
    """Sub-seed for iteration ``index``: output ``index`` of SplitMix64(seed)."""
    seed = check_seed(seed)
    return _mix((seed + (int(index) + 1) * _GAMMA) & _MASK)


class SplitMix64:
    """Sequential SplitMix64 stream for the few places that draw one value
    at a time (k-means++ seeding)."""

    def __init__(self, seed):
        self.state = check_seed(seed)

    def next_uint64(self):
        self.state = (self.state + _GAMMA) & _MASK
        return _mix(self.state)

    def random(self):
        return (self.next_uint64() >> 11) * 2.0**-53

    def integers(self, bound):
        """Unbiased integer in ``[0, bound)``."""
        if bound < 1:
            raise ValueError(f"bound must be >= 1, got {bound}")
        threshold = (2**64) % bound
        while True:
            r = self.next_uint64()
            if r >= threshold:
                return r % bound


def uniform_stream(seed, size):
    """The first ``size`` SplitMix64 outputs of ``seed`` as floats in [0, 1)."""
    seed = check_seed(seed)
    counters = np.arange(1, size + 1, dtype=np.uint64)
    with np.errstate(over="ignore"):
        z = np.uint64(seed) + counters * np.uint64(_GAMMA)
        z = (z ^ (z >> np.uint64(30))) * np.uint64(0xBF58476D1CE4E5B9)
        z = (z ^ (z >> np.uint64(27))) * np.uint64(0x94D049BB133111EB)
        z = z ^ (z >> np.uint64(31))
    return (z >> np.uint64(11)).astype(np.float64) * 2.0**-53


def normal_stream(seed, size):
    """``size`` standard normal deviates from ``seed`` via Box-Muller."""
    n_pairs = (size + 1) // 2
    u = uniform_stream(seed, 2 * n_pairs)
    radius = np.sqrt(-2.0 * np.log1p(-u[0::2]))
    angle = 2.0 * np.pi * u[1::2]
    out = np.empty(2 * n_pairs)
    out[0::2] = radius * np.cos(angle)
    out[1::2] = radius * np.sin(angle)
    return out[:size]


def seeded_permutation(n, seed):
    """Fisher-Yates permutation of ``0..n-1`` driven by SplitMix64(seed).

    Walks ``i`` from ``n - 1`` down to 1 and swaps position ``i`` with an
    unbiased draw from ``[0, i]``.
    """
    if isinstance(n, (bool, np.bool_)) or not isinstance(n, (int, np.integer)):
        raise TypeError(f"n must be an integer, got {type(n).__name__}")
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    return _kernels.fisher_yates(int(n), np.uint64(check_seed(seed)))


def _as_vector(a, name):
    arr = np.ascontiguousarray(a, dtype=np.float64)
    if arr.ndim != 1:
        raise ValueError(f"{name} must be a 1-D vector, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise ValueError(f"{name} contains non-finite values")
    return arr


def distance(metric, a, b):
    """Distance between two vectors under ``metric``.

    >>> distance("euclidean", [0, 0], [3, 4])
    5.0
    """
    check_metric(metric)
    a = _as_vector(a, "a")
    b = _as_vector(b, "b")
    if a.shape[0] != b.shape[0]:
        raise ValueError(f"dimension mismatch: a has length {a.shape[0]}, b has length {b.shape[0]}")
    return float(_kernels.euclid(a, b))


def running_mean_update(centroid, count, point):
    """Fold ``point`` into a mean of ``count`` samples.

    Returns the new centroid ``(count * centroid + point) / (count + 1)``
    and the new count.
    """
    centroid = _as_vector(centroid, "centroid")
    point = _as_vector(point, "point")
    count = check_positive_int(count, "count")
    if centroid.shape[0] != point.shape[0]:
        raise ValueError(
            f"dimension mismatch: centroid has length {centroid.shape[0]}, point has length {point.shape[0]}"
        )
    return (count * centroid + point) / (count + 1), count + 1
