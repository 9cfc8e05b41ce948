"""Orthogonal Procrustes alignment and the configuration distance built on it.

The distance between two n x d configurations is the minimum over orthogonal
transforms (rotations and reflections) of the mean squared row difference
after centering each configuration; it is invariant to translation and
orthogonal transformation of either argument.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .numerics import svd_small

__all__ = ["AlignmentResult", "procrustes_align", "d_g", "scaled_procrustes"]


@dataclass(frozen=True)
class AlignmentResult:
    """Optimal orthogonal map of the second configuration onto the first.

    rotation: d x d orthogonal matrix P (applied as Y @ P; reflections allowed)
    scale:    multiplier applied to Y before P (1.0 for unscaled alignment)
    residual: minimized mean squared row difference of the centered configurations
    """

    rotation: np.ndarray
    scale: float
    residual: float


def _centered_pair(X, Y):
    X = np.asarray(X, dtype=float)
    Y = np.asarray(Y, dtype=float)
    if X.shape != Y.shape or X.ndim != 2:
        raise ValueError(f"configurations must share an (n, d) shape, got {X.shape} vs {Y.shape}")
    if X.shape[0] < 1:
        raise ValueError("configurations must contain at least one row")
    return X - X.mean(axis=0), Y - Y.mean(axis=0)


def procrustes_align(X: np.ndarray, Y: np.ndarray) -> AlignmentResult:
    """Orthogonal P minimizing mean squared error between centered X and centered Y @ P."""
    Xc, Yc = _centered_pair(X, Y)
    n = X.shape[0]
    U, s, V = svd_small(Yc.T @ Xc)
    P = U @ V.T
    residual = float(np.sum((Xc - Yc @ P) ** 2)) / n
    return AlignmentResult(rotation=P, scale=1.0, residual=residual)


def d_g(X: np.ndarray, Y: np.ndarray) -> float:
    """Centered mean squared discrepancy minimized over orthogonal transforms."""
    return procrustes_align(X, Y).residual


def scaled_procrustes(X: np.ndarray, Y: np.ndarray) -> AlignmentResult:
    """Minimize mean squared error of centered X vs s * centered Y @ P over
    orthogonal P and nonnegative scale s.

    The optimal s is the sum of singular values of (centered Y)^T (centered X)
    divided by the squared Frobenius norm of centered Y.
    """
    Xc, Yc = _centered_pair(X, Y)
    n = X.shape[0]
    y_norm_sq = float(np.sum(Yc * Yc))
    if y_norm_sq == 0.0:
        raise ValueError("degenerate reference: second configuration has zero variance")
    U, s, V = svd_small(Yc.T @ Xc)
    P = U @ V.T
    scale = float(np.sum(s)) / y_norm_sq
    residual = float(np.sum((Xc - scale * (Yc @ P)) ** 2)) / n
    return AlignmentResult(rotation=P, scale=scale, residual=residual)
