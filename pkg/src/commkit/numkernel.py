"""Dense linear-algebra kernels with explicit accuracy contracts.

Thin wrappers over LAPACK (via numpy) that validate inputs, check the
residual guarantees callers rely on, and raise :class:`NumericalError`
instead of returning garbage.
"""

from __future__ import annotations

import numpy as np

from .exceptions import ArgumentError, NumericalError, ValidationError

SYMMETRY_TOL = 1e-8
EIG_TOL = 1e-6
COND_LIMIT = 1e12


def _as_finite(M, name="matrix") -> np.ndarray:
    M = np.asarray(M, dtype=float)
    if not np.all(np.isfinite(M)):
        raise NumericalError(f"{name} contains NaN or Inf")
    return M


def is_symmetric(M, tol: float = SYMMETRY_TOL) -> bool:
    M = np.asarray(M)
    if M.ndim != 2 or M.shape[0] != M.shape[1]:
        return False
    scale = max(1.0, float(np.max(np.abs(M), initial=0.0)))
    return bool(np.max(np.abs(M - M.T), initial=0.0) <= tol * scale)


def symmetrize(M) -> np.ndarray:
    M = np.asarray(M, dtype=float)
    return (M + M.T) / 2.0


def sym_eig(M) -> tuple[np.ndarray, np.ndarray]:
    """Eigendecomposition of a symmetric matrix.

    Returns
    -------
    eigenvalues : ndarray of shape (n,)
        Ascending.
    eigenvectors : ndarray of shape (n, n)
        Orthonormal columns; column ``i`` pairs with ``eigenvalues[i]``.
    """
    M = _as_finite(M)
    if not is_symmetric(M):
        raise ValidationError("sym_eig requires a symmetric matrix; symmetrize first")
    try:
        w, V = np.linalg.eigh(M)
    except np.linalg.LinAlgError as exc:
        raise NumericalError(f"eigensolver failed to converge: {exc}") from exc
    norm = max(1.0, np.linalg.norm(M, 2) if M.size else 0.0)
    if M.size and np.max(np.abs(M @ V - V * w)) > EIG_TOL * norm:
        raise NumericalError("eigendecomposition residual exceeds tolerance")
    return w, V


def truncated_svd(M, d: int) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Best rank-``d`` factorisation ``M ~ U diag(s) V^T``.

    ``U`` is ``(rows, d)``, ``s`` holds the ``d`` largest singular values in
    descending order and ``V`` is ``(cols, d)``.
    """
    M = _as_finite(M)
    if M.ndim != 2:
        raise ArgumentError("truncated_svd expects a 2-D matrix")
    d = int(d)
    if not 1 <= d <= min(M.shape):
        raise ArgumentError(f"rank d={d} outside [1, {min(M.shape)}]")
    try:
        U, s, Vt = np.linalg.svd(M, full_matrices=False)
    except np.linalg.LinAlgError as exc:
        raise NumericalError(f"SVD failed to converge: {exc}") from exc
    return U[:, :d], s[:d], Vt[:d].T


def condition_number(M) -> float:
    M = _as_finite(M)
    with np.errstate(divide="ignore"):
        return float(np.linalg.cond(M))


def solve(M, B) -> np.ndarray:
    """Solve ``M X = B`` for square nonsingular ``M``."""
    M = _as_finite(M)
    B = _as_finite(B, "right-hand side")
    if M.ndim != 2 or M.shape[0] != M.shape[1]:
        raise ArgumentError("solve requires a square coefficient matrix")
    cond = condition_number(M)
    if not np.isfinite(cond) or cond > COND_LIMIT:
        raise NumericalError(f"matrix is singular or ill-conditioned (condition estimate {cond:.3g})")
    X = np.linalg.solve(M, B)
    return _as_finite(X, "solution")


def inverse(M) -> np.ndarray:
    M = np.asarray(M, dtype=float)
    return solve(M, np.eye(M.shape[0]))


def matpow(M, k: int) -> np.ndarray:
    """``M**k`` by repeated squaring; ``M**0`` is the identity."""
    M = np.asarray(M, dtype=float)
    if M.ndim != 2 or M.shape[0] != M.shape[1]:
        raise ArgumentError("matpow requires a square matrix")
    k = int(k)
    if k < 0:
        raise ArgumentError("matpow exponent must be nonnegative")
    result = np.eye(M.shape[0])
    base = M.copy()
    while k:
        if k & 1:
            result = result @ base
        k >>= 1
        if k:
            base = base @ base
    return result


def spectral_radius(M) -> float:
    M = np.asarray(M, dtype=float)
    if M.size == 0:
        return 0.0
    if is_symmetric(M):
        return float(np.max(np.abs(np.linalg.eigvalsh(M))))
    return float(np.max(np.abs(np.linalg.eigvals(M))))


def pairwise_euclidean(Z) -> np.ndarray:
    """Euclidean distances between all rows of ``Z`` (exactly zero diagonal)."""
    Z = np.asarray(Z, dtype=float)
    diff = Z[:, None, :] - Z[None, :, :]
    D = np.sqrt(np.einsum("ijk,ijk->ij", diff, diff))
    np.fill_diagonal(D, 0.0)
    return D
