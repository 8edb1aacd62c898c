"""Reference dense complex linear algebra.

Hermitian eigendecomposition, SVD and QR are delegated to LAPACK through numpy;
the small non-Hermitian eigenvalue problem uses the package's own Hessenberg/QR
kernel. The spectral norm is a deterministic power iteration on ``A^H A``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import kernels
from .errors import (
    ConvergenceFailure,
    NotOrthonormal,
    NotSquare,
    OracleViolation,
    RankDeficient,
    ShapeMismatch,
    TooLarge,
)

SMALL_EIG_LIMIT = 64
ORTHONORMAL_TOL = 1e-8


@dataclass(frozen=True)
class EigenDecomposition:
    values: np.ndarray  # descending, algebraic
    vectors: np.ndarray  # columns orthonormal


@dataclass(frozen=True)
class SubspaceDecomposition:
    r: int
    values: np.ndarray
    q_r: np.ndarray


def as_matrix(a) -> np.ndarray:
    a = np.asarray(a, dtype=np.complex128)
    if a.ndim == 1:
        a = a[:, None]
    if a.ndim != 2:
        raise ShapeMismatch("expected a 2-D matrix")
    return a


def _square(h) -> np.ndarray:
    h = as_matrix(h)
    if h.shape[0] != h.shape[1]:
        raise NotSquare(f"matrix of shape {h.shape} is not square")
    return h


def hermitian_eig(h) -> EigenDecomposition:
    """Full eigendecomposition of ``(H + H^H)/2``, eigenvalues in descending order."""
    h = _square(h)
    h = 0.5 * (h + h.conj().T)
    try:
        w, v = np.linalg.eigh(h)
    except np.linalg.LinAlgError as exc:
        raise ConvergenceFailure(str(exc)) from exc
    return EigenDecomposition(w[::-1].copy(), v[:, ::-1].copy())


def hermitian_eigvals(h) -> np.ndarray:
    h = _square(h)
    try:
        w = np.linalg.eigvalsh(0.5 * (h + h.conj().T))
    except np.linalg.LinAlgError as exc:
        raise ConvergenceFailure(str(exc)) from exc
    return w[::-1].copy()


def hermitian_norm(h) -> float:
    """``||H||_2`` of a Hermitian matrix as the largest eigenvalue magnitude."""
    w = hermitian_eigvals(h)
    return float(max(abs(w[0]), abs(w[-1]))) if w.size else 0.0


def top_block(h, r: int) -> SubspaceDecomposition:
    eig = hermitian_eig(h)
    return SubspaceDecomposition(r, eig.values[:r].copy(), eig.vectors[:, :r].copy())


def general_eig_small(a) -> np.ndarray:
    """All eigenvalues of a small (r <= 64) complex matrix, unordered."""
    a = _square(a)
    if a.shape[0] > SMALL_EIG_LIMIT:
        raise TooLarge(f"general_eig_small handles r <= {SMALL_EIG_LIMIT}")
    if a.shape[0] == 0:
        return np.zeros(0, dtype=np.complex128)
    if not np.all(np.isfinite(a)):
        raise ConvergenceFailure("non-finite input")
    lam, ok = kernels.small_eigvals(a, 30 * max(a.shape[0], 1) + 30)
    if not ok:
        raise ConvergenceFailure("shifted QR did not converge")
    return lam


def small_svd(a):
    """Thin SVD ``A = U diag(sigma) V^H`` with sigma descending."""
    a = as_matrix(a)
    try:
        u, s, vh = np.linalg.svd(a, full_matrices=False)
    except np.linalg.LinAlgError as exc:
        raise ConvergenceFailure(str(exc)) from exc
    return u, s, vh.conj().T


def singular_values(a) -> np.ndarray:
    try:
        return np.linalg.svd(as_matrix(a), compute_uv=False)
    except np.linalg.LinAlgError as exc:
        raise ConvergenceFailure(str(exc)) from exc


def pinv_solve(a, b, rcond: float = 1e-10) -> np.ndarray:
    """Least-squares solution ``A^+ B`` for full-column-rank ``A`` (Householder QR)."""
    a = as_matrix(a)
    b_in = np.asarray(b, dtype=np.complex128)
    b = b_in[:, None] if b_in.ndim == 1 else b_in
    if b.shape[0] != a.shape[0]:
        raise ShapeMismatch(f"A has {a.shape[0]} rows but B has {b.shape[0]}")
    m, k = a.shape
    if k > m:
        raise RankDeficient(f"{m}x{k} matrix cannot have full column rank")
    s = singular_values(a)
    if s.size == 0 or s[-1] <= rcond * s[0]:
        raise RankDeficient("matrix is numerically column-rank deficient")
    q, rr = np.linalg.qr(a, mode="reduced")
    x = np.linalg.solve(rr, q.conj().T @ b)
    return x[:, 0] if b_in.ndim == 1 else x


def pinv(a) -> np.ndarray:
    a = as_matrix(a)
    return pinv_solve(a, np.eye(a.shape[0], dtype=np.complex128))


def spectral_norm(a, rtol: float = 1e-13, max_iter: int = 10_000) -> float:
    """Largest singular value by power iteration on ``A^H A``.

    The start vector comes from a fixed-seed generator, so the result is
    deterministic. Stops when successive estimates agree to ``rtol``.
    """
    a = as_matrix(a)
    if a.size == 0 or not np.any(a):
        return 0.0
    rng = np.random.default_rng(0x5EED)
    x = rng.standard_normal(a.shape[1]) + 1j * rng.standard_normal(a.shape[1])
    x /= np.linalg.norm(x)
    est = 0.0
    for _ in range(max_iter):
        y = a @ x
        new = float(np.linalg.norm(y))
        z = a.conj().T @ y
        zn = np.linalg.norm(z)
        if zn == 0.0:
            return new
        x = z / zn
        if abs(new - est) <= rtol * new:
            return new
        est = new
    return est


def _check_orthonormal(u: np.ndarray, name: str):
    g = u.conj().T @ u
    if np.max(np.abs(g - np.eye(u.shape[1]))) > ORTHONORMAL_TOL * max(1, u.shape[0]):
        raise NotOrthonormal(f"{name} does not have orthonormal columns")


def sin_theta(u, v, check: bool = True) -> float:
    """``||U U^H - V V^H||_2`` for two orthonormal n x r bases.

    Both projectors live in ``span[U, V]`` (dimension <= 2r), so the Hermitian
    difference is compressed onto an orthonormal basis of that span and its
    largest eigenvalue magnitude is taken there.
    """
    u = as_matrix(u)
    v = as_matrix(v)
    if u.shape != v.shape:
        raise ShapeMismatch(f"{u.shape} vs {v.shape}")
    if check:
        _check_orthonormal(u, "U")
        _check_orthonormal(v, "V")
    n, r = u.shape
    if 2 * r >= n:
        d = u @ u.conj().T - v @ v.conj().T
        return hermitian_norm(d)
    w, _ = np.linalg.qr(np.hstack([u, v]), mode="reduced")
    pu = w.conj().T @ u
    pv = w.conj().T @ v
    return hermitian_norm(pu @ pu.conj().T - pv @ pv.conj().T)


def procrustes_align(q, qhat, check: bool = True) -> np.ndarray:
    """Unitary ``U`` minimizing ``||Qhat - Q U||_F`` (polar factor of ``Q^H Qhat``).

    Also enforces ``||Qhat - Q U||_2 <= 2 sin_theta(Q, Qhat)`` and raises
    :class:`OracleViolation` if it fails.
    """
    q = as_matrix(q)
    qhat = as_matrix(qhat)
    if q.shape != qhat.shape:
        raise ShapeMismatch(f"{q.shape} vs {qhat.shape}")
    w1, _, w2 = small_svd(q.conj().T @ qhat)
    u = w1 @ w2.conj().T
    if check:
        resid = spectral_norm(qhat - q @ u)
        bound = 2.0 * sin_theta(q, qhat)
        if resid > bound + 1e-10:
            raise OracleViolation(f"Procrustes residual {resid:.3e} exceeds 2 sin(theta) = {bound:.3e}")
    return u
