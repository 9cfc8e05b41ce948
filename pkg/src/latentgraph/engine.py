"""Synchronous message-passing engine for declarative layer programs.

A layer is (message, commutative reduction, update): every node applies
``message`` to its own state, the engine reduces incoming messages over each
node's in-neighborhood, and ``update`` combines the node's previous state with
the aggregate. Restricting the reduction vocabulary to {sum, min, max} keeps
aggregation order-independent over the neighbor multiset.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .graphs import DirectedGraph

__all__ = ["LayerProgram", "run_layers", "REDUCTIONS"]

REDUCTIONS = ("sum", "min", "max")


@dataclass(frozen=True)
class LayerProgram:
    """One synchronous layer.

    message: (n, in_arity) states -> (n, agg_arity) messages, row v = what v sends.
    update:  ((n, in_arity) states, (n, agg_arity) aggregates) -> (n, out_arity).
    identity: aggregate assigned to nodes with no in-neighbors; must be the
        neutral element of the reduction (0 for sum, a maximal sentinel for min).
    """

    in_arity: int
    agg_arity: int
    out_arity: int
    reduction: str
    message: Callable[[np.ndarray], np.ndarray] = field(repr=False)
    update: Callable[[np.ndarray, np.ndarray], np.ndarray] = field(repr=False)
    identity: float = 0.0

    def __post_init__(self):
        if self.reduction not in REDUCTIONS:
            raise ValueError(f"reduction must be one of {REDUCTIONS}, got {self.reduction!r}")
        if min(self.in_arity, self.agg_arity, self.out_arity) < 1:
            raise ValueError("arities must be positive")
        if self.reduction == "sum" and self.identity != 0.0:
            raise ValueError("sum reduction requires identity 0")


def _aggregate(g: DirectedGraph, msgs: np.ndarray, reduction: str, identity: float) -> np.ndarray:
    if msgs.ndim == 1:
        msgs = msgs[:, None]
    arity = msgs.shape[1]
    if reduction == "sum":
        out = np.zeros((g.n, arity))
        if g.num_arcs:
            # np.add.at applies arc contributions sequentially in (target,
            # ascending source) order, matching a plain CSR matvec term by term.
            np.add.at(out, g.in_targets(), msgs[g.in_adj])
        return out
    op = np.minimum if reduction == "min" else np.maximum
    ext = np.vstack([msgs[g.in_adj], np.full((1, arity), identity)])
    out = op.reduceat(ext, g.in_ptr[:-1], axis=0)
    empty = g.in_degree == 0
    if empty.any():
        out[empty] = identity
    return out


def run_layers(g: DirectedGraph, X0: np.ndarray, layers, halt=None, return_info=False):
    """Run a sequence of LayerPrograms synchronously and return the final states.

    ``halt(prev, new) -> bool`` may stop execution early; it is only honored when
    the remaining layers are all the same program object as the one just run, so
    skipping them cannot change which functions would have been applied.
    """
    layers = list(layers)
    H = np.array(X0, dtype=float)
    if H.ndim != 2 or H.shape[0] != g.n:
        raise ValueError("X0 must be (n, arity)")
    arity = H.shape[1]
    for i, layer in enumerate(layers):
        if layer.in_arity != arity:
            raise ValueError(
                f"arity mismatch at layer {i}: expects {layer.in_arity}, chain provides {arity}")
        arity = layer.out_arity
    suffix_uniform = [True] * len(layers)
    for i in range(len(layers) - 2, -1, -1):
        suffix_uniform[i] = suffix_uniform[i + 1] and layers[i] is layers[i + 1]
    executed = 0
    for i, layer in enumerate(layers):
        A = _aggregate(g, np.asarray(layer.message(H), dtype=float),
                       layer.reduction, layer.identity)
        H_new = np.asarray(layer.update(H, A), dtype=float)
        if H_new.shape != (g.n, layer.out_arity):
            raise ValueError(f"layer {i} produced shape {H_new.shape}, "
                             f"declared out_arity {layer.out_arity}")
        executed += 1
        stop = halt is not None and suffix_uniform[i] and halt(H, H_new)
        H = H_new
        if stop:
            break
    return (H, executed) if return_info else H
