"""Hidden-feature samplers, geometric graph generators, and synthetic node features."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.spatial.distance import cdist

from .graphs import DirectedGraph, build_graph

__all__ = [
    "LandmarkSet", "sample_hidden", "default_knn_k", "build_knn_graph",
    "build_threshold_graph", "knn_radii", "select_landmarks", "make_node_features",
]

_CHUNK = 1024  # rows per pairwise-distance block; bounds peak memory at ~n*CHUNK*8 bytes

# Fixed two-moon geometry: two interleaved half-circles of radius 1 whose
# centers are offset by (1, 0.5). The second moon is the reflected lower arc.
_MOON_OFFSET = (1.0, 0.5)

# Fixed centers for the 3-component Gaussian mixture (unit variance per axis).
_BLOB_SEPARATION = 4.0


@dataclass(frozen=True)
class LandmarkSet:
    """Ordered set of distinct node ids carrying one-hot identifiers."""

    ids: np.ndarray

    def __post_init__(self):
        ids = np.asarray(self.ids, dtype=np.int64)
        if ids.ndim != 1:
            raise ValueError("landmark ids must be a flat sequence")
        if ids.size and ((np.diff(ids) <= 0).any() or ids[0] < 0):
            raise ValueError("landmark ids must be strictly increasing and nonnegative")
        object.__setattr__(self, "ids", ids)

    @property
    def m(self) -> int:
        return int(self.ids.size)


def sample_hidden(kind: str, n: int, d: int, noise: float = 0.0, seed: int = 0):
    """Sample n hidden feature vectors i.i.d. from a named density.

    kinds:
      two-moon       two interleaved half-circles (d must equal 2) plus isotropic
                     Gaussian noise with standard deviation ``noise``; labels 0/1.
      uniform-square uniform on [0,1]^d; no labels; ``noise`` is ignored.
      gaussian-blobs equal-weight mixture of 3 unit-variance Gaussians at fixed,
                     well-separated centers; labels 0/1/2; ``noise`` is ignored.

    Returns (Z, labels) where labels is None for unlabeled kinds. Deterministic
    in ``seed``.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    if noise < 0:
        raise ValueError("noise must be >= 0")
    rng = np.random.default_rng(seed)
    if kind == "two-moon":
        if d != 2:
            raise ValueError("two-moon requires d = 2")
        labels = rng.integers(0, 2, size=n)
        t = rng.uniform(0.0, np.pi, size=n)
        ox, oy = _MOON_OFFSET
        x = np.where(labels == 0, np.cos(t), ox - np.cos(t))
        y = np.where(labels == 0, np.sin(t), oy - np.sin(t))
        z = np.column_stack([x, y])
        if noise > 0:
            z = z + rng.normal(0.0, noise, size=(n, 2))
        return z, labels
    if kind == "uniform-square":
        if d < 1:
            raise ValueError("d must be >= 1")
        return rng.random((n, d)), None
    if kind == "gaussian-blobs":
        if d < 1:
            raise ValueError("d must be >= 1")
        centers = np.zeros((3, d))
        centers[1, 0] = _BLOB_SEPARATION
        if d >= 2:
            centers[2, 1] = _BLOB_SEPARATION
        else:
            centers[2, 0] = 2 * _BLOB_SEPARATION
        labels = rng.integers(0, 3, size=n)
        z = centers[labels] + rng.standard_normal((n, d))
        return z, labels
    raise ValueError(f"unknown generator kind: {kind!r}")


def default_knn_k(n: int) -> int:
    """Size-based choice of k for kNN graph generation: floor(sqrt(n) * ln(n) / 10)."""
    k = math.floor(math.sqrt(n) * math.log(n) / 10.0)
    if k < 1:
        raise ValueError(f"graph too small for the default k schedule (n={n} gives k={k})")
    return k


def _distance_blocks(Z: np.ndarray):
    """Yield (row offset, Euclidean distance block to all points, self distances masked)."""
    n = Z.shape[0]
    for start in range(0, n, _CHUNK):
        stop = min(start + _CHUNK, n)
        dist = cdist(Z[start:stop], Z)
        dist[np.arange(stop - start), np.arange(start, stop)] = np.inf
        yield start, dist


def _k_smallest_ids(row: np.ndarray, k: int, kth: float) -> np.ndarray:
    """Ids of the k smallest entries, ties at the k-th value broken by lower id."""
    less = np.nonzero(row < kth)[0]
    if less.size == k:
        return less
    ties = np.nonzero(row == kth)[0]
    return np.concatenate([less, ties[: k - less.size]])


def build_knn_graph(Z: np.ndarray, k: int) -> DirectedGraph:
    """Directed kNN graph: arc v -> u for each of v's k nearest neighbors.

    Every out-degree is exactly k; equidistant candidates at the k-th position
    are resolved in favor of the lower node id.
    """
    Z = np.asarray(Z, dtype=float)
    if Z.ndim != 2:
        raise ValueError("Z must be 2-D")
    n = Z.shape[0]
    if not 1 <= k < n:
        raise ValueError(f"k must satisfy 1 <= k < n (k={k}, n={n})")
    if not np.isfinite(Z).all():
        raise ValueError("Z must be finite")
    tails = np.empty(n * k, dtype=np.int64)
    heads = np.empty(n * k, dtype=np.int64)
    for start, dist in _distance_blocks(Z):
        kth = np.partition(dist, k - 1, axis=1)[:, k - 1]
        for r in range(dist.shape[0]):
            v = start + r
            ids = _k_smallest_ids(dist[r], k, kth[r])
            tails[v * k:(v + 1) * k] = v
            heads[v * k:(v + 1) * k] = np.sort(ids)
    return build_graph(n, np.column_stack([tails, heads]))


def knn_radii(Z: np.ndarray, k: int) -> np.ndarray:
    """Per-node Euclidean distance to the k-th nearest neighbor (self excluded)."""
    Z = np.asarray(Z, dtype=float)
    n = Z.shape[0]
    if not 1 <= k < n:
        raise ValueError(f"k must satisfy 1 <= k < n (k={k}, n={n})")
    radii = np.empty(n)
    for start, dist in _distance_blocks(Z):
        radii[start:start + dist.shape[0]] = np.partition(dist, k - 1, axis=1)[:, k - 1]
    return radii


def build_threshold_graph(Z: np.ndarray, radii) -> DirectedGraph:
    """Arc v -> u iff ||z_v - z_u|| < radii[v] (strict), v != u."""
    Z = np.asarray(Z, dtype=float)
    radii = np.asarray(radii, dtype=float)
    n = Z.shape[0]
    if radii.shape != (n,):
        raise ValueError("radii must have one entry per node")
    if (radii <= 0).any():
        raise ValueError("radii must all be positive")
    tail_parts, head_parts = [], []
    for start, dist in _distance_blocks(Z):
        rows, cols = np.nonzero(dist < radii[start:start + dist.shape[0], None])
        tail_parts.append(rows + start)
        head_parts.append(cols)
    tails = np.concatenate(tail_parts) if tail_parts else np.empty(0, dtype=np.int64)
    heads = np.concatenate(head_parts) if head_parts else np.empty(0, dtype=np.int64)
    return build_graph(n, np.column_stack([tails, heads]))


def select_landmarks(n: int, m: int, seed: int = 0) -> LandmarkSet:
    """Choose m distinct node ids uniformly without replacement, sorted ascending."""
    if not 1 <= m <= n:
        raise ValueError(f"need 1 <= m <= n (m={m}, n={n})")
    rng = np.random.default_rng(seed)
    ids = rng.permutation(n)[:m]
    return LandmarkSet(np.sort(ids))


def make_node_features(g: DirectedGraph, landmarks: LandmarkSet) -> np.ndarray:
    """Synthetic input features: column 0 out-degree, column 1 node count, then
    one landmark one-hot column per landmark (all zero for other nodes).

    An empty landmark set yields the plain n x 2 [degree, n] features.
    """
    m = landmarks.m
    if m and (landmarks.ids[-1] >= g.n):
        raise ValueError("landmark id out of range for graph")
    X = np.zeros((g.n, 2 + m))
    X[:, 0] = g.out_degree
    X[:, 1] = g.n
    if m:
        X[landmarks.ids, 2 + np.arange(m)] = 1.0
    return X
