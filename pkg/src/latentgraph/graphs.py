"""Directed graph container (CSR adjacency, both directions) and structural queries."""

from __future__ import annotations

import numpy as np

__all__ = ["DirectedGraph", "build_graph", "transpose", "is_weakly_connected"]


class DirectedGraph:
    """Immutable directed graph over nodes 0..n-1.

    Adjacency is stored in CSR form for both directions: ``out_adj[out_ptr[v]:out_ptr[v+1]]``
    are the heads of arcs leaving v (sorted ascending), and ``in_adj[in_ptr[v]:in_ptr[v+1]]``
    are the tails of arcs entering v (sorted ascending). No self-loops, no duplicate arcs.
    """

    __slots__ = ("n", "out_ptr", "out_adj", "in_ptr", "in_adj", "out_degree", "in_degree",
                 "_in_targets", "_out_tails")

    def __init__(self, n, out_ptr, out_adj, in_ptr, in_adj):
        self.n = int(n)
        self.out_ptr = out_ptr
        self.out_adj = out_adj
        self.in_ptr = in_ptr
        self.in_adj = in_adj
        self.out_degree = np.diff(out_ptr)
        self.in_degree = np.diff(in_ptr)
        self._in_targets = None
        self._out_tails = None

    @property
    def num_arcs(self) -> int:
        return int(self.out_adj.shape[0])

    def out_neighbors(self, v) -> np.ndarray:
        return self.out_adj[self.out_ptr[v]:self.out_ptr[v + 1]]

    def in_neighbors(self, v) -> np.ndarray:
        return self.in_adj[self.in_ptr[v]:self.in_ptr[v + 1]]

    def in_targets(self) -> np.ndarray:
        """Arc target ids aligned with ``in_adj`` (i.e. repeat(v, in_degree[v]))."""
        if self._in_targets is None:
            self._in_targets = np.repeat(np.arange(self.n, dtype=np.int64), self.in_degree)
        return self._in_targets

    def out_tails(self) -> np.ndarray:
        """Arc tail ids aligned with ``out_adj``."""
        if self._out_tails is None:
            self._out_tails = np.repeat(np.arange(self.n, dtype=np.int64), self.out_degree)
        return self._out_tails

    def arcs(self) -> np.ndarray:
        """All arcs as an (E, 2) array of (tail, head), sorted by (tail, head)."""
        return np.column_stack([self.out_tails(), self.out_adj])

    def __eq__(self, other):
        if not isinstance(other, DirectedGraph):
            return NotImplemented
        return (self.n == other.n
                and np.array_equal(self.out_ptr, other.out_ptr)
                and np.array_equal(self.out_adj, other.out_adj))

    def __repr__(self):
        return f"DirectedGraph(n={self.n}, arcs={self.num_arcs})"


def build_graph(n: int, arcs) -> DirectedGraph:
    """Build a DirectedGraph from (tail, head) pairs.

    Duplicate arcs are collapsed. Endpoints outside [0, n) and self-loops raise ValueError.
    """
    if n < 1:
        raise ValueError(f"node count must be positive, got {n}")
    pairs = np.asarray(list(arcs) if not isinstance(arcs, np.ndarray) else arcs,
                       dtype=np.int64).reshape(-1, 2)
    if pairs.size:
        bad = (pairs < 0) | (pairs >= n)
        if bad.any():
            t, h = pairs[bad.any(axis=1)][0]
            raise ValueError(f"endpoint out of range: arc ({t}, {h}) with n={n}")
        loops = pairs[:, 0] == pairs[:, 1]
        if loops.any():
            t = pairs[loops][0][0]
            raise ValueError(f"self-loop not allowed: arc ({t}, {t})")
        pairs = np.unique(pairs, axis=0)  # dedup + sort by (tail, head)
    tails, heads = pairs[:, 0], pairs[:, 1]
    out_ptr = np.zeros(n + 1, dtype=np.int64)
    np.cumsum(np.bincount(tails, minlength=n), out=out_ptr[1:])
    order = np.lexsort((tails, heads))
    in_adj = tails[order]
    in_ptr = np.zeros(n + 1, dtype=np.int64)
    np.cumsum(np.bincount(heads, minlength=n), out=in_ptr[1:])
    return DirectedGraph(n, out_ptr, heads.copy(), in_ptr, in_adj)


def transpose(g: DirectedGraph) -> DirectedGraph:
    """Graph with every arc reversed; the in/out CSR views swap roles."""
    return DirectedGraph(g.n, g.in_ptr, g.in_adj, g.out_ptr, g.out_adj)


def is_weakly_connected(g: DirectedGraph) -> bool:
    """True iff the undirected symmetrization of g has a single component."""
    if g.n == 1:
        return True
    seen = np.zeros(g.n, dtype=bool)
    stack = [0]
    seen[0] = True
    count = 1
    while stack:
        v = stack.pop()
        for u in np.concatenate([g.out_neighbors(v), g.in_neighbors(v)]):
            if not seen[u]:
                seen[u] = True
                count += 1
                stack.append(int(u))
    return count == g.n
