"""Compiled inner loops shared by the threshold algorithms and the PRNG.

All kernels take C-contiguous float64 arrays. They perform no validation;
callers in the public modules are responsible for that.
"""
import numpy as np
from numba import njit

GAMMA = np.uint64(0x9E3779B97F4A7C15)
MIX1 = np.uint64(0xBF58476D1CE4E5B9)
MIX2 = np.uint64(0x94D049BB133111EB)
S30 = np.uint64(30)
S27 = np.uint64(27)
S31 = np.uint64(31)
ONE = np.uint64(1)
ZERO = np.uint64(0)


@njit(cache=True)
def splitmix_mix(z):
    z = (z ^ (z >> S30)) * MIX1
    z = (z ^ (z >> S27)) * MIX2
    return z ^ (z >> S31)


@njit(cache=True)
def euclid(a, b):
    s = 0.0
    for j in range(a.shape[0]):
        t = a[j] - b[j]
        s += t * t
    return np.sqrt(s)


@njit(cache=True)
def fisher_yates(n, seed):
    perm = np.arange(n)
    state = np.uint64(seed)
    for i in range(n - 1, 0, -1):
        bound = np.uint64(i + 1)
        # 2**64 mod bound; draws below it are rejected to remove modulo bias
        threshold = (ZERO - bound) % bound
        while True:
            state = state + GAMMA
            r = splitmix_mix(state)
            if r >= threshold:
                break
        j = np.int64(r % bound)
        tmp = perm[i]
        perm[i] = perm[j]
        perm[j] = tmp
    return perm


@njit(cache=True)
def tsg_kernel(X, order, theta, frozen):
    n, d = X.shape
    labels = np.empty(n, dtype=np.int64)
    centroids = np.empty((n, d), dtype=np.float64)
    counts = np.zeros(n, dtype=np.int64)
    n_evals = 0

    first = order[0]
    centroids[0, :] = X[first]
    counts[0] = 1
    labels[first] = 0
    k_found = 1

    for p in range(1, n):
        i = order[p]
        x = X[i]
        best = -1
        best_d = np.inf
        for k in range(k_found):
            dist = euclid(x, centroids[k])
            n_evals += 1
            if dist <= theta and dist < best_d:
                best = k
                best_d = dist
        if best >= 0:
            if not frozen:
                c = counts[best]
                for j in range(d):
                    centroids[best, j] = (c * centroids[best, j] + x[j]) / (c + 1)
            counts[best] += 1
            labels[i] = best
        else:
            centroids[k_found, :] = x
            counts[k_found] = 1
            labels[i] = k_found
            k_found += 1

    return labels, centroids[:k_found].copy(), counts[:k_found].copy(), n_evals


@njit(cache=True)
def nearest_kernel(X, centroids):
    n = X.shape[0]
    k_total = centroids.shape[0]
    labels = np.empty(n, dtype=np.int64)
    dists = np.empty(n, dtype=np.float64)
    for i in range(n):
        best = 0
        best_d = euclid(X[i], centroids[0])
        for k in range(1, k_total):
            dist = euclid(X[i], centroids[k])
            if dist < best_d:
                best = k
                best_d = dist
        labels[i] = best
        dists[i] = best_d
    return labels, dists
