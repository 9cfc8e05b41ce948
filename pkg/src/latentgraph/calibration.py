"""Closed-form fits for the global scale constant: a per-graph value from
training coordinates, and a power law in the node count for generalizing
across graph sizes."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .procrustes import scaled_procrustes

__all__ = ["KappaModel", "fit_kappa_transductive", "fit_kappa_curve"]


@dataclass(frozen=True)
class KappaModel:
    """Scale constant as a function of graph size.

    mode "fixed": kappa(n) = kappa. mode "power-law": kappa(n) = a * n**b.
    """

    mode: str
    kappa: float | None = None
    a: float | None = None
    b: float | None = None

    def __post_init__(self):
        if self.mode == "fixed":
            if self.kappa is None or not self.kappa > 0:
                raise ValueError("fixed mode requires kappa > 0")
        elif self.mode == "power-law":
            if self.a is None or self.b is None or not self.a > 0:
                raise ValueError("power-law mode requires a > 0 and b")
        else:
            raise ValueError(f"unknown mode: {self.mode!r}")

    @classmethod
    def fixed(cls, kappa: float) -> "KappaModel":
        return cls(mode="fixed", kappa=float(kappa))

    @classmethod
    def power_law(cls, a: float, b: float) -> "KappaModel":
        return cls(mode="power-law", a=float(a), b=float(b))

    def evaluate(self, n: int) -> float:
        if self.mode == "fixed":
            return float(self.kappa)
        return float(self.a * float(n) ** self.b)

    def to_dict(self) -> dict:
        if self.mode == "fixed":
            return {"mode": "fixed", "kappa": self.kappa}
        return {"mode": "power-law", "a": self.a, "b": self.b}


def fit_kappa_transductive(unit_embedding: np.ndarray, truth: np.ndarray, train_ids) -> float:
    """Scale constant from training nodes, given an embedding recovered with kappa=1.

    Because the whole recovery is homogeneous of degree one in kappa, the scale
    from a scaled Procrustes fit of the training truth onto the unit-kappa
    embedding rows minimizes the training discrepancy over kappa exactly.
    """
    unit_embedding = np.asarray(unit_embedding, dtype=float)
    truth = np.asarray(truth, dtype=float)
    train_ids = np.asarray(train_ids, dtype=np.int64)
    rows = unit_embedding[train_ids]
    d = unit_embedding.shape[1]
    if rows.shape[0] < d + 1:
        raise ValueError(f"need at least d + 1 = {d + 1} training nodes, got {rows.shape[0]}")
    if truth.shape != rows.shape:
        raise ValueError("truth must hold one row per training node")
    result = scaled_procrustes(truth, rows)
    if not result.scale > 0:
        raise ValueError("degenerate fit: estimated scale is not positive")
    return result.scale


def fit_kappa_curve(samples) -> KappaModel:
    """Power-law fit of scale constants against graph sizes.

    ``samples`` is a sequence of (n, kappa) pairs with at least two distinct n;
    the fit is least squares of log kappa on log n, exact when the samples lie
    on a power law.
    """
    pairs = [(int(n), float(k)) for n, k in samples]
    if any(k <= 0 for _, k in pairs):
        raise ValueError("all kappa samples must be positive")
    ns = np.array([n for n, _ in pairs], dtype=float)
    ks = np.array([k for _, k in pairs], dtype=float)
    if np.unique(ns).size < 2:
        raise ValueError("underdetermined: need samples at >= 2 distinct n")
    A = np.column_stack([np.ones_like(ns), np.log(ns)])
    coef, *_ = np.linalg.lstsq(A, np.log(ks), rcond=None)
    return KappaModel.power_law(a=float(np.exp(coef[0])), b=float(coef[1]))
