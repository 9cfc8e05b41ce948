"""Dense linear algebra for small symmetric problems: cyclic Jacobi
eigendecomposition, Gram-matrix SVD, and classical multidimensional scaling.

Everything here is deterministic: fixed sweep order, fixed sign conventions,
no randomized or blocked kernels.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

__all__ = ["SymEigResult", "sym_eig", "svd_small", "classical_mds"]

_SYM_TOL = 1e-12
_MAX_SWEEPS = 100


@dataclass(frozen=True)
class SymEigResult:
    """Full spectrum of a symmetric matrix.

    eigenvalues are descending; eigenvectors[:, i] pairs with eigenvalues[i];
    each eigenvector's largest-magnitude component is positive.
    """

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray


def _fix_signs(V: np.ndarray) -> np.ndarray:
    lead = np.abs(V).argmax(axis=0)
    flip = V[lead, np.arange(V.shape[1])] < 0
    V[:, flip] *= -1.0
    return V


def sym_eig(A: np.ndarray) -> SymEigResult:
    """Eigendecomposition of a symmetric matrix by cyclic Jacobi rotations.

    Parameters
    ----------
    A : (n, n) array
        Symmetric within 1e-12 (relative to its max-norm); asymmetric input
        raises ValueError.

    Returns
    -------
    SymEigResult
        Descending eigenvalues and orthonormal eigenvectors (columns).
    """
    A = np.asarray(A, dtype=float)
    if A.ndim != 2 or A.shape[0] != A.shape[1]:
        raise ValueError("A must be square")
    n = A.shape[0]
    scale = max(1.0, float(np.abs(A).max())) if n else 1.0
    if n and float(np.abs(A - A.T).max()) > _SYM_TOL * scale:
        raise ValueError("matrix is not symmetric within tolerance")
    W = 0.5 * (A + A.T)
    V = np.eye(n)
    fro = float(np.linalg.norm(W))
    off_tol = 1e-14 * max(fro, np.finfo(float).tiny)
    skip_tol = 1e-18 * max(fro, np.finfo(float).tiny)
    for _ in range(_MAX_SWEEPS):
        off = float(np.sqrt(max(0.0, np.sum(W * W) - np.sum(np.diagonal(W) ** 2))))
        if off <= off_tol:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = W[p, q]
                if abs(apq) <= skip_tol:
                    continue
                app, aqq = W[p, p], W[q, q]
                theta = (aqq - app) / (2.0 * apq)
                t = 1.0 / (abs(theta) + np.sqrt(theta * theta + 1.0))
                if theta < 0:
                    t = -t
                c = 1.0 / np.sqrt(t * t + 1.0)
                s = t * c
                colp = W[:, p].copy()
                colq = W[:, q].copy()
                W[:, p] = c * colp - s * colq
                W[:, q] = s * colp + c * colq
                rowp = W[p, :].copy()
                rowq = W[q, :].copy()
                W[p, :] = c * rowp - s * rowq
                W[q, :] = s * rowp + c * rowq
                W[p, p] = app - t * apq
                W[q, q] = aqq + t * apq
                W[p, q] = 0.0
                W[q, p] = 0.0
                vp = V[:, p].copy()
                vq = V[:, q].copy()
                V[:, p] = c * vp - s * vq
                V[:, q] = s * vp + c * vq
    vals = np.diagonal(W).copy()
    order = np.argsort(-vals, kind="stable")
    return SymEigResult(vals[order], _fix_signs(V[:, order]))


def _complete_orthonormal(M: np.ndarray, have: int) -> np.ndarray:
    """Fill columns have.. of M with vectors orthonormal to the earlier ones."""
    n, r = M.shape
    col = have
    for cand in range(n):
        if col == r:
            break
        v = np.zeros(n)
        v[cand] = 1.0
        for j in range(col):
            v -= (M[:, j] @ v) * M[:, j]
        for j in range(col):  # second pass stabilizes near-dependent candidates
            v -= (M[:, j] @ v) * M[:, j]
        norm = float(np.linalg.norm(v))
        if norm > 0.5:
            M[:, col] = v / norm
            col += 1
    if col < r:
        raise RuntimeError("failed to complete orthonormal basis")
    return M


def svd_small(A: np.ndarray):
    """Thin SVD of a small dense matrix via the eigendecomposition of its Gram
    matrix on the shorter side.

    Returns (U, s, V) with A ~= U @ diag(s) @ V.T, singular values descending,
    and orthonormal columns in U and V (rank-deficient directions are completed
    deterministically from standard basis vectors).
    """
    A = np.asarray(A, dtype=float)
    if A.ndim != 2:
        raise ValueError("A must be 2-D")
    if not np.isfinite(A).all():
        raise ValueError("A must be finite")
    p, q = A.shape
    r = min(p, q)
    if r == 0:
        return np.zeros((p, 0)), np.zeros(0), np.zeros((q, 0))
    if p >= q:
        eig = sym_eig(A.T @ A)
        V = eig.eigenvectors[:, :r]
        s = np.sqrt(np.clip(eig.eigenvalues[:r], 0.0, None))
        U = np.zeros((p, r))
        cutoff = max(s[0], 1.0) * 1e-13
        have = 0
        for i in range(r):
            if s[i] <= cutoff:
                break
            # squaring in the Gram matrix costs orthogonality on this side;
            # Gram-Schmidt against the (accurate) leading columns restores it
            u = (A @ V[:, i]) / s[i]
            for j in range(have):
                u -= (U[:, j] @ u) * U[:, j]
            norm = float(np.linalg.norm(u))
            if norm < 0.5:
                break
            U[:, i] = u / norm
            have = i + 1
        _complete_orthonormal(U, have)
        return U, s, V
    U, s, V = svd_small(A.T)
    return V, s, U


def classical_mds(D: np.ndarray, dim: int, return_eigenvalues: bool = False):
    """Classical MDS embedding of a symmetric distance matrix.

    Double-centers the squared distances, takes the top ``dim`` eigenpairs, and
    scales eigenvectors by the square roots of the (clamped-nonnegative)
    eigenvalues. Output columns are centered.

    Parameters
    ----------
    D : (m, m) array
        Symmetric, nonnegative, zero diagonal.
    dim : int
        Target dimension; must be <= m - 1.
    """
    D = np.asarray(D, dtype=float)
    m = D.shape[0]
    if D.shape != (m, m):
        raise ValueError("D must be square")
    if not 1 <= dim <= m - 1:
        raise ValueError(f"dim must satisfy 1 <= dim <= m - 1 (dim={dim}, m={m})")
    sq = D * D
    means = sq.mean(axis=0)
    B = -0.5 * (sq - means[None, :] - means[:, None] + means.mean())
    eig = sym_eig(0.5 * (B + B.T))
    vals = eig.eigenvalues[:dim]
    coords = eig.eigenvectors[:, :dim] * np.sqrt(np.clip(vals, 0.0, None))
    if return_eigenvalues:
        return coords, eig.eigenvalues
    return coords
