"""Random graph builders and independent test oracles."""

import numpy as np

from latentgraph.graphs import build_graph


def random_strongly_connected(n, seed, extra_per_node=4):
    """Random cycle through all nodes plus random extra arcs (strongly connected)."""
    rng = np.random.default_rng(seed)
    perm = rng.permutation(n)
    arcs = {(int(perm[i]), int(perm[(i + 1) % n])) for i in range(n)}
    extra = rng.integers(0, n, size=(extra_per_node * n, 2))
    arcs |= {(int(t), int(h)) for t, h in extra if t != h}
    return build_graph(n, sorted(arcs))


def random_undirected(n, seed, extra_per_node=3):
    """Symmetric random graph (arcs in both directions), connected by a path."""
    rng = np.random.default_rng(seed)
    arcs = set()
    for i in range(n - 1):
        arcs |= {(i, i + 1), (i + 1, i)}
    extra = rng.integers(0, n, size=(extra_per_node * n, 2))
    for t, h in extra:
        if t != h:
            arcs |= {(int(t), int(h)), (int(h), int(t))}
    return build_graph(n, sorted(arcs))


def random_orthogonal(d, rng):
    """Haar-ish orthogonal matrix from the QR of a Gaussian matrix."""
    q, r = np.linalg.qr(rng.standard_normal((d, d)))
    return q * np.sign(np.diagonal(r))


def grid_procrustes_oracle(X, Y, step=1e-4):
    """Brute-force minimum of the centered mean squared discrepancy over a grid
    of 2-D rotation angles and both reflection branches."""
    X = np.asarray(X, float)
    Y = np.asarray(Y, float)
    assert X.shape[1] == 2
    n = X.shape[0]
    Xc = X - X.mean(axis=0)
    Yc = Y - Y.mean(axis=0)
    angles = np.arange(0.0, 2 * np.pi, step)
    c, s = np.cos(angles), np.sin(angles)
    best = np.inf
    for sign in (1.0, -1.0):
        # columns of P: [c, s], sign * [-s, c]
        P = np.empty((angles.size, 2, 2))
        P[:, 0, 0] = c
        P[:, 1, 0] = s
        P[:, 0, 1] = -s * sign
        P[:, 1, 1] = c * sign
        mapped = np.einsum("nd,gde->gne", Yc, P)
        res = np.sum((mapped - Xc[None]) ** 2, axis=(1, 2)) / n
        best = min(best, float(res.min()))
    return best


def lazy_walk_matrix(g):
    """Dense lazy random-walk operator 0.5 * (I + R), R[v, u] = 1/deg(u) per arc u->v."""
    R = np.zeros((g.n, g.n))
    for v in range(g.n):
        for u in g.in_neighbors(v):
            R[v, u] = 1.0 / g.out_degree[u]
    return 0.5 * (np.eye(g.n) + R)
