"""Layer programs for coordinate recovery: stationary-distribution iteration,
edge-length readout, landmark shortest paths, landmark-matrix flooding, and the
final MDS / nearest-landmark readout.

All programs run on the generic engine; the pipeline module provides direct
(non message-passing) counterparts of the same math.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .engine import LayerProgram
from .numerics import classical_mds

__all__ = [
    "ScaleParams", "DistanceTable", "stationary_program", "stationary_halt",
    "edge_length_readout", "inf_sentinel", "bellman_ford_program",
    "bellman_ford_halt", "landmark_matrix_program", "landmark_matrix_from_state",
    "distance_state_halt", "final_readout",
]


@dataclass(frozen=True)
class ScaleParams:
    """Global scale constant and latent dimension for the edge-length formula.

    ``kappa`` absorbs every unknown multiplicative constant of the generation
    process; it is the only free scalar of the pipeline (see edge_length_readout).
    """

    kappa: float
    dim: int

    def __post_init__(self):
        if not self.kappa > 0:
            raise ValueError("kappa must be positive")
        if self.dim < 1:
            raise ValueError("dim must be >= 1")


@dataclass(frozen=True)
class DistanceTable:
    """Shortest-path lengths from each landmark.

    per_node[v, i]        length of the shortest path from landmark i to node v
    landmark_matrix[i, j] length from landmark i to landmark j (zero diagonal)
    inf_value             sentinel marking "no path"; exceeds any real path length
    """

    per_node: np.ndarray
    landmark_matrix: np.ndarray
    inf_value: float

    def __post_init__(self):
        if (self.per_node < 0).any() or (self.landmark_matrix < 0).any():
            raise ValueError("path lengths must be nonnegative")
        if np.diagonal(self.landmark_matrix).any():
            raise ValueError("landmark self-distances must be zero")

    def inf_count(self) -> int:
        return int((self.per_node >= self.inf_value).sum())


def _checked_inverse_degree(deg: np.ndarray) -> np.ndarray:
    if (deg <= 0).any():
        raise RuntimeError("dangling node: random-walk step requires out-degree >= 1 everywhere")
    return 1.0 / deg


def stationary_program(L: int, lazy: bool = True) -> list[LayerProgram]:
    """Layers that iterate the random-walk mass vector on [degree, n] features.

    State after l layers is [d_v, n, x_v] where x is the l-th iterate of the
    walk operator applied to the all-ones vector; x converges to n times the
    stationary distribution. By default each step is the lazy half-step
    x <- (x + Rx) / 2, which has the same fixed point as the plain operator R
    but also converges on periodic (e.g. bipartite) graphs; ``lazy=False``
    selects the plain iterate.

    The per-neighbor term is written x_u * (1 / d_u) so that the floating-point
    products match a transition-matrix multiply with precomputed reciprocals.
    """
    if L < 1:
        raise ValueError("L must be >= 1")

    def first_update(H, A):
        x1 = 0.5 * (1.0 + A[:, 0]) if lazy else A[:, 0]
        return np.column_stack([H, x1])

    def mid_message(H):
        return H[:, 2] * _checked_inverse_degree(H[:, 0])

    def mid_update(H, A):
        out = H.copy()
        out[:, 2] = 0.5 * (H[:, 2] + A[:, 0]) if lazy else A[:, 0]
        return out

    first = LayerProgram(in_arity=2, agg_arity=1, out_arity=3, reduction="sum",
                         message=lambda H: _checked_inverse_degree(H[:, 0]),
                         update=first_update)
    mid = LayerProgram(in_arity=3, agg_arity=1, out_arity=3, reduction="sum",
                       message=mid_message, update=mid_update)
    return [first] + [mid] * (L - 1)


def stationary_halt(tol: float):
    """Stop once the walk column moves less than ``tol`` in max-norm.

    The implicit zeroth iterate is the all-ones vector, so the check is also
    applied right after the first layer.
    """

    def halt(prev, new):
        base = prev[:, 2] if prev.shape[1] >= 3 else 1.0
        return float(np.max(np.abs(new[:, 2] - base))) < tol

    return halt


def edge_length_readout(degree, n, stat, params: ScaleParams):
    """Estimated latent length of arcs leaving a node.

        length = kappa * (degree / (n * stat))**(1 / (dim + 2))

    where ``stat`` estimates n times the node's stationary probability. The
    asymptotic scale law gives the local threshold radius as
    (C * d_v / (n^2 * pi_v))**(1/(dim+2)) times an unknown global constant;
    folding every unknown into the single factor ``kappa`` and replacing
    n^2 * pi_v by n * stat leaves exactly this expression. Accepts scalars or
    arrays.
    """
    degree = np.asarray(degree, dtype=float)
    stat = np.asarray(stat, dtype=float)
    if (stat <= 0).any():
        raise ValueError("stationary estimate not positive")
    if (degree < 1).any():
        raise ValueError("degree must be >= 1")
    out = params.kappa * (degree / (n * stat)) ** (1.0 / (params.dim + 2))
    return float(out) if out.ndim == 0 else out


def inf_sentinel(n: int, lengths: np.ndarray) -> float:
    """Finite "no path" marker: longer than any simple path, comparison-safe."""
    return float(n * np.max(lengths) + 1.0)


def bellman_ford_program(m: int, n: int, lengths: np.ndarray) -> list[LayerProgram]:
    """Layers computing shortest-path lengths from each landmark to every node.

    Input states are the landmark one-hot block (arity m); output states are
    [one-hot, d] with d[i] the length of the shortest path from landmark i,
    where an arc leaving node s has length ``lengths[s]``. Unreached entries
    hold the sentinel from ``inf_sentinel``. The returned sequence has n - 1
    relaxation rounds (enough for any simple path); pair with
    ``bellman_ford_halt`` to stop at the fixed point.
    """
    lengths = np.asarray(lengths, dtype=float)
    if (lengths <= 0).any():
        raise ValueError("arc lengths must be positive")
    inf = inf_sentinel(n, lengths)

    def init_message(H):
        return np.where(H > 0.5, lengths[:, None], inf)

    def init_update(H, A):
        own = np.where(H > 0.5, 0.0, inf)
        return np.hstack([H, np.minimum(own, A)])

    def relax_message(H):
        return H[:, m:] + lengths[:, None]

    def relax_update(H, A):
        out = H.copy()
        out[:, m:] = np.minimum(H[:, m:], A)
        return out

    init = LayerProgram(in_arity=m, agg_arity=m, out_arity=2 * m, reduction="min",
                        message=init_message, update=init_update, identity=inf)
    relax = LayerProgram(in_arity=2 * m, agg_arity=m, out_arity=2 * m, reduction="min",
                         message=relax_message, update=relax_update, identity=inf)
    return [init] + [relax] * max(0, n - 2)


def bellman_ford_halt(m: int):
    """Stop relaxing once no distance entry changed (exact fixed point)."""

    def halt(prev, new):
        return prev.shape == new.shape and np.array_equal(prev[:, m:], new[:, m:])

    return halt


def landmark_matrix_program(m: int, inf: float) -> list[LayerProgram]:
    """Layers flooding every landmark's distance vector to all nodes.

    Input states are [one-hot, d] (arity 2m); output states append an m*m block
    holding, at node v, the rows d_{u_1}, ..., d_{u_m} it has received so far
    (element-wise min over everything seen; ``inf`` elsewhere). On a strongly
    connected graph every node ends with the identical complete block.
    """

    def announce(H):
        onehot, d = H[:, :m], H[:, m:2 * m]
        return np.where(np.repeat(onehot, m, axis=1) > 0.5, np.tile(d, (1, m)), inf)

    def init_update(H, A):
        return np.hstack([H, np.minimum(announce(H), A)])

    def relay_message(H):
        return H[:, 2 * m:]

    def relay_update(H, A):
        out = H.copy()
        out[:, 2 * m:] = np.minimum(H[:, 2 * m:], A)
        return out

    init = LayerProgram(in_arity=2 * m, agg_arity=m * m, out_arity=2 * m + m * m,
                        reduction="min", message=announce, update=init_update, identity=inf)
    relay = LayerProgram(in_arity=2 * m + m * m, agg_arity=m * m, out_arity=2 * m + m * m,
                         reduction="min", message=relay_message, update=relay_update,
                         identity=inf)
    return [init, relay]


def distance_state_halt(offset: int):
    """Stop once state columns from ``offset`` on stopped changing."""

    def halt(prev, new):
        return prev.shape == new.shape and np.array_equal(prev[:, offset:], new[:, offset:])

    return halt


def landmark_matrix_from_state(H: np.ndarray, m: int) -> np.ndarray:
    """Extract the landmark-to-landmark matrix from flooded states.

    Node v's flooded block stores d_{u_i} in row i, i.e. entry (i, j) is the
    length from landmark j to landmark i; transposing yields the (from i, to j)
    convention. Blocks are combined across nodes by element-wise min, which on
    a strongly connected graph equals every single node's copy and in general
    fills each row from the landmark that announced it.
    """
    n = H.shape[0]
    blocks = H[:, 2 * m:].reshape(n, m, m)
    flooded = blocks.min(axis=0)
    return flooded.T.copy()


def final_readout(D: np.ndarray, d_v: np.ndarray, is_landmark: int | None, dim: int,
                  inf_value: float | None = None) -> np.ndarray:
    """Coordinate of one node from the landmark matrix and its distance vector.

    Landmark i gets row i of the MDS embedding of D; any other node gets the
    row of its nearest landmark (lowest index on ties). D must already be
    symmetrized.
    """
    D = np.asarray(D, dtype=float)
    m = D.shape[0]
    if dim > m - 1:
        raise ValueError("dim must be <= m - 1")
    coords = classical_mds(D, dim)
    if is_landmark is not None:
        return coords[is_landmark]
    d_v = np.asarray(d_v, dtype=float)
    if inf_value is not None and (d_v >= inf_value).all():
        raise RuntimeError("node unreachable from all landmarks")
    return coords[int(np.argmin(d_v))]
