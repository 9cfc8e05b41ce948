"""End-to-end coordinate recovery: synthetic features -> stationary estimate ->
edge lengths -> landmark shortest paths -> MDS -> per-node coordinates.

Two interchangeable engines compute the stationary vector and the distance
table: "direct" uses a sparse transition-matrix iteration plus Dijkstra from
each landmark, "mp" executes the equivalent layer programs on the generic
message-passing engine. Both produce identical numbers: the walk iterates
apply the same reciprocal-multiply-and-accumulate in the same order, and a
shortest path's length is the same left-to-right sum of arc lengths under
either algorithm.
"""

from __future__ import annotations

import time
from dataclasses import dataclass

import numpy as np
import scipy.sparse as sp
from scipy.sparse.csgraph import dijkstra as _csgraph_dijkstra

from . import programs
from .calibration import KappaModel
from .engine import run_layers
from .graphs import DirectedGraph, is_weakly_connected
from .numerics import classical_mds
from .programs import DistanceTable, ScaleParams
from .synthetic import LandmarkSet, build_knn_graph, make_node_features, select_landmarks

__all__ = ["RecoveryConfig", "recover_features", "reconstruction_score",
           "MP_NODE_LIMIT", "DEFAULT_LANDMARKS", "STATIONARY_ITER_CAP"]

MP_NODE_LIMIT = 2000          # message-passing state is m + m^2 wide per node
DEFAULT_LANDMARKS = 500       # default m, clipped to n // 2 on small graphs
STATIONARY_ITER_CAP = 50_000


@dataclass(frozen=True)
class RecoveryConfig:
    """Settings for one recovery run.

    m=None selects min(DEFAULT_LANDMARKS, n // 2). stationary_tol=None selects
    1 / n**2 (max-norm change between consecutive walk iterates).
    """

    dim: int
    m: int | None = None
    kappa_model: KappaModel = KappaModel.fixed(1.0)
    seed: int = 0
    engine: str = "direct"
    stationary_tol: float | None = None
    stationary_max_iters: int = STATIONARY_ITER_CAP
    lazy_walk: bool = True

    def __post_init__(self):
        if self.dim < 1:
            raise ValueError("dim must be >= 1")
        if self.engine not in ("direct", "mp"):
            raise ValueError(f"engine must be 'direct' or 'mp', got {self.engine!r}")
        if self.m is not None and self.m < 1:
            raise ValueError("m must be >= 1")

    def resolve_m(self, n: int) -> int:
        m = min(DEFAULT_LANDMARKS, max(1, n // 2)) if self.m is None else self.m
        if m > n:
            raise ValueError(f"m={m} exceeds node count n={n}")
        if self.dim > m - 1:
            raise ValueError(f"dim={self.dim} requires m >= dim + 1, got m={m}")
        return m


def _walk_matrix(g: DirectedGraph) -> sp.csr_matrix:
    """Column-stochastic transition matrix: entry (v, u) = 1/out_degree(u) for arc u->v."""
    if (g.out_degree == 0).any():
        raise RuntimeError("dangling node: random-walk step requires out-degree >= 1 everywhere")
    inv = 1.0 / g.out_degree.astype(float)
    return sp.csr_matrix((inv[g.in_adj], g.in_adj, g.in_ptr), shape=(g.n, g.n))


def stationary_direct(g: DirectedGraph, tol: float, max_iters: int, lazy: bool = True):
    """Iterate the (lazy) walk operator on the all-ones vector until the
    max-norm change drops below ``tol``; returns (estimate of n * pi, iterations)."""
    R = _walk_matrix(g)
    x = np.ones(g.n)
    iters = 0
    for step in range(1, max_iters + 1):
        y = R @ x
        x_new = 0.5 * (x + y) if lazy else y
        delta = float(np.max(np.abs(x_new - x)))
        x = x_new
        iters = step
        if delta < tol:
            break
    return x, iters


def _stationary_mp(g: DirectedGraph, X0: np.ndarray, tol: float, max_iters: int, lazy: bool):
    layers = programs.stationary_program(max_iters, lazy=lazy)
    H, used = run_layers(g, X0[:, :2], layers, halt=programs.stationary_halt(tol),
                         return_info=True)
    return H[:, 2].copy(), used


def _distances_direct(g: DirectedGraph, lengths: np.ndarray, landmarks: LandmarkSet):
    """Dijkstra from every landmark; arc u->v weighs lengths[u]. Returns the
    (n, m) from-landmark table with unreachable cells set to the shared sentinel."""
    inf = programs.inf_sentinel(g.n, lengths)
    data = np.repeat(lengths, g.out_degree)
    W = sp.csr_matrix((data, g.out_adj, g.out_ptr), shape=(g.n, g.n))
    dist = _csgraph_dijkstra(W, directed=True, indices=landmarks.ids)
    per_node = dist.T.copy()
    per_node[~np.isfinite(per_node)] = inf
    return per_node, inf


def _distances_mp(g: DirectedGraph, lengths: np.ndarray, onehot: np.ndarray, m: int):
    inf = programs.inf_sentinel(g.n, lengths)
    bf = programs.bellman_ford_program(m, g.n, lengths)
    H, bf_layers = run_layers(g, onehot, bf, halt=programs.bellman_ford_halt(m),
                              return_info=True)
    lm_init, lm_relay = programs.landmark_matrix_program(m, inf)
    lm_layers_seq = [lm_init] + [lm_relay] * max(0, g.n - 2)
    H2, lm_layers = run_layers(g, H, lm_layers_seq,
                               halt=programs.distance_state_halt(2 * m), return_info=True)
    per_node = H2[:, m:2 * m].copy()
    D = programs.landmark_matrix_from_state(H2, m)
    return per_node, D, inf, bf_layers, lm_layers


def recover_features(g: DirectedGraph, cfg: RecoveryConfig,
                     landmark_matrix_override: np.ndarray | None = None):
    """Recover per-node coordinates from graph structure alone.

    Returns (Zhat, landmarks, diagnostics). ``landmark_matrix_override`` is a
    test hook replacing the landmark-to-landmark shortest-path matrix with a
    caller-supplied one (e.g. exact distances); everything else is unchanged.
    """
    n = g.n
    if not is_weakly_connected(g):
        raise RuntimeError("input graph is not weakly connected")
    m = cfg.resolve_m(n)
    if cfg.engine == "mp" and n > MP_NODE_LIMIT:
        raise ValueError(f"mp engine is limited to n <= {MP_NODE_LIMIT} (state is m + m^2 wide)")
    tol = cfg.stationary_tol if cfg.stationary_tol is not None else 1.0 / (n * n)
    kappa = cfg.kappa_model.evaluate(n)
    params = ScaleParams(kappa=kappa, dim=cfg.dim)
    started = time.perf_counter()

    landmarks = select_landmarks(n, m, cfg.seed)
    X = make_node_features(g, landmarks)

    if cfg.engine == "direct":
        stat, stat_iters = stationary_direct(g, tol, cfg.stationary_max_iters, cfg.lazy_walk)
    else:
        stat, stat_iters = _stationary_mp(g, X, tol, cfg.stationary_max_iters, cfg.lazy_walk)
    lengths = programs.edge_length_readout(g.out_degree, n, stat, params)

    bf_layers = lm_layers = None
    if cfg.engine == "direct":
        per_node, inf = _distances_direct(g, lengths, landmarks)
        D = per_node[landmarks.ids, :].T.copy()
    else:
        per_node, D, inf, bf_layers, lm_layers = _distances_mp(g, lengths, X[:, 2:], m)
    table = DistanceTable(per_node=per_node, landmark_matrix=D, inf_value=inf)

    if landmark_matrix_override is not None:
        D = np.asarray(landmark_matrix_override, dtype=float)
        if D.shape != (m, m):
            raise ValueError(f"override matrix must be ({m}, {m})")

    is_landmark = np.zeros(n, dtype=bool)
    is_landmark[landmarks.ids] = True
    unreached = (per_node.min(axis=1) >= inf) & ~is_landmark
    if unreached.any():
        raise RuntimeError(f"node unreachable from all landmarks: {int(np.nonzero(unreached)[0][0])}")

    D_sym = 0.5 * (D + D.T)
    coords, spectrum = classical_mds(D_sym, cfg.dim, return_eigenvalues=True)
    nearest = np.argmin(per_node, axis=1)
    Zhat = coords[nearest]
    Zhat[landmarks.ids] = coords[np.arange(m)]

    diagnostics = {
        "engine": cfg.engine,
        "kappa": kappa,
        "stationary": stat,
        "stationary_iterations": stat_iters,
        "lengths": lengths,
        "distance_table": table,
        "inf_count": table.inf_count(),
        "inf_count_landmark_matrix": int((table.landmark_matrix >= inf).sum()),
        "mds_eigenvalues": spectrum,
        "nearest_landmark": nearest,
        "wall_time_s": time.perf_counter() - started,
    }
    if bf_layers is not None:
        diagnostics["bellman_ford_layers"] = bf_layers
        diagnostics["landmark_matrix_layers"] = lm_layers
    return Zhat, landmarks, diagnostics


def reconstruction_score(Zhat: np.ndarray, g: DirectedGraph, k: int) -> float:
    """Jaccard similarity between the arc set of the kNN graph rebuilt from the
    recovered coordinates and the arc set of the observed graph."""
    if k >= g.n:
        raise ValueError("k must be < n")
    rebuilt = build_knn_graph(np.asarray(Zhat, dtype=float), k)
    scale = np.int64(g.n)
    a = rebuilt.out_tails() * scale + rebuilt.out_adj
    b = g.out_tails() * scale + g.out_adj
    inter = np.intersect1d(a, b, assume_unique=True).size
    union = a.size + b.size - inter
    return 1.0 if union == 0 else inter / union
