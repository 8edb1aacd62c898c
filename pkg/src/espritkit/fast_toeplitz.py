"""Structured Hermitian Toeplitz operator and its dominant eigenspace.

Matrix-vector products go through a circulant embedding and the package FFT,
costing O(m log m) with ``m`` the smallest power of two >= 2n. The dominant
eigenpairs come from a thick-restart Krylov (Lanczos-type) iteration with full
reorthogonalization and explicit Rayleigh-Ritz projection, which only touches
the operator through that matvec.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from .dense_linalg import SubspaceDecomposition
from .errors import ConvergenceFailure, InvalidRank, LengthMismatch
from .kernels import fft, ifft

# re-exported so callers can use fast_toeplitz.fft / ifft
__all__ = ["HermitianToeplitz", "fft", "ifft", "toeplitz_matvec", "top_r_eigs", "embedding_size"]


def embedding_size(n: int) -> int:
    m = 1
    while m < 2 * n:
        m *= 2
    return m


@dataclass(frozen=True, eq=False)
class HermitianToeplitz:
    """n x n Hermitian Toeplitz matrix stored by its first column.

    Entry ``(i, j)`` is ``first_col[i - j]`` for ``i >= j`` and
    ``conj(first_col[j - i])`` otherwise. ``first_col[0]`` is forced real;
    the discarded imaginary part is kept in ``discarded_imag``.
    """

    first_col: np.ndarray
    discarded_imag: float = field(default=0.0)

    def __post_init__(self):
        c = np.array(self.first_col, dtype=np.complex128).reshape(-1)
        if c.size < 1:
            raise ValueError("empty Toeplitz column")
        imag0 = float(abs(c[0].imag))
        c[0] = c[0].real
        c.setflags(write=False)
        object.__setattr__(self, "first_col", c)
        object.__setattr__(self, "discarded_imag", max(float(self.discarded_imag), imag0))

    @property
    def n(self) -> int:
        return int(self.first_col.shape[0])

    def dense(self) -> np.ndarray:
        n = self.n
        idx = np.arange(n)[:, None] - np.arange(n)[None, :]
        c = self.first_col
        return np.where(idx >= 0, c[np.abs(idx)], np.conj(c[np.abs(idx)]))

    @cached_property
    def embedding(self) -> np.ndarray:
        """First column ``c`` of the m x m circulant containing this matrix.

        Layout (m = embedding_size(n) >= 2n, a power of two)::

            c[0 .. n-1]      = t_0, t_1, ..., t_{n-1}        (first column)
            c[n .. m-n]      = 0                              (padding, >= 1 slot)
            c[m-k]           = conj(t_k)   for k = 1..n-1     (first row, reversed)

        The circulant has ``C[i, j] = c[(i - j) mod m]``, so its leading n x n
        block is exactly this Toeplitz matrix.
        """
        n = self.n
        m = embedding_size(n)
        c = np.zeros(m, dtype=np.complex128)
        c[:n] = self.first_col
        if n > 1:
            c[m - n + 1:] = np.conj(self.first_col[1:][::-1])
        return c

    @cached_property
    def symbol(self) -> np.ndarray:
        return fft(self.embedding)

    @cached_property
    def row_norm_bound(self) -> float:
        """``sum_k |t_k|`` style bound on ``||T||_2`` (max absolute row sum)."""
        a = np.abs(self.first_col)
        return float(a[0] + 2.0 * a[1:].sum())

    def matvec(self, x) -> np.ndarray:
        return toeplitz_matvec(self, x)


def toeplitz_matvec(t: HermitianToeplitz, x) -> np.ndarray:
    """``T @ x`` for a vector or an n x k block of columns."""
    x = np.asarray(x, dtype=np.complex128)
    n = t.n
    if x.shape[0] != n or x.ndim not in (1, 2):
        raise LengthMismatch(f"operand has {x.shape[0]} rows, matrix is {n}x{n}")
    m = t.symbol.shape[0]
    pad = np.zeros((m,) + x.shape[1:], dtype=np.complex128)
    pad[:n] = x
    sym = t.symbol if x.ndim == 1 else t.symbol[:, None]
    return ifft(sym * fft(pad))[:n]


def _orthogonalize(v: np.ndarray, basis: np.ndarray) -> np.ndarray:
    # classical Gram-Schmidt with one reorthogonalization pass
    if basis.shape[1] == 0:
        return v
    for _ in range(2):
        v = v - basis @ (basis.conj().T @ v)
    return v


def top_r_eigs(
    t: HermitianToeplitz,
    r: int,
    tol: float = 1e-11,
    max_iter: int = 20_000,
    seed: int = 0,
    krylov_dim: int | None = None,
) -> SubspaceDecomposition:
    """Top-r eigenpairs (algebraic order) of a Hermitian Toeplitz matrix.

    Parameters
    ----------
    t : HermitianToeplitz
    r : int
        Block size, ``1 <= r < n``.
    tol : float
        Converged when every Ritz residual ``||T q_i - lambda_i q_i||`` is at
        most ``tol * ||T||`` (``||T||`` estimated by the extreme Ritz values).
    max_iter : int
        Budget of matrix-vector products.
    seed : int
        Seeds the random start vector (and breakdown restarts).
    krylov_dim : int, optional
        Maximum basis size before a thick restart. Defaults to
        ``max(2r + 20, 40)`` clipped to ``n``.
    """
    n = t.n
    r = int(r)
    if not 1 <= r < n:
        raise InvalidRank(f"r={r} must satisfy 1 <= r < n={n}")
    if tol <= 0:
        raise ValueError("tol must be positive")
    kmax = min(n, krylov_dim or max(2 * r + 20, 40))
    kmax = max(kmax, min(n, r + 2))
    keep = min(kmax - 1, max(r + 2, kmax // 2))

    rng = np.random.Generator(np.random.Philox(int(seed)))

    def random_vector():
        return rng.standard_normal(n) + 1j * rng.standard_normal(n)

    basis = np.zeros((n, kmax), dtype=np.complex128)
    images = np.zeros((n, kmax), dtype=np.complex128)
    width = 0
    nxt = random_vector()
    matvecs = 0

    while True:
        while width < kmax:
            v = _orthogonalize(nxt, basis[:, :width])
            vn = np.linalg.norm(v)
            if vn <= 1e-10 * max(np.linalg.norm(nxt), 1e-300):
                # invariant subspace reached: continue with a fresh direction
                v = _orthogonalize(random_vector(), basis[:, :width])
                vn = np.linalg.norm(v)
                if vn == 0.0:
                    break
            v = v / vn
            basis[:, width] = v
            images[:, width] = toeplitz_matvec(t, v)
            matvecs += 1
            nxt = images[:, width]
            width += 1

        v_k = basis[:, :width]
        tv_k = images[:, :width]
        proj = v_k.conj().T @ tv_k
        proj = 0.5 * (proj + proj.conj().T)
        theta, y = np.linalg.eigh(proj)
        theta = theta[::-1]
        y = y[:, ::-1]

        x = v_k @ y[:, :r]
        tx = tv_k @ y[:, :r]
        resid = np.linalg.norm(tx - x * theta[:r], axis=0)
        norm_est = max(abs(theta[0]), abs(theta[-1]))
        if width == n or np.all(resid <= tol * norm_est):
            # re-orthonormalize the Ritz block; column phases follow diag(R)
            q, rr = np.linalg.qr(x, mode="reduced")
            d = np.diag(rr)
            q = q * np.where(d == 0, 1.0, d / np.where(d == 0, 1.0, np.abs(d)))[None, :]
            return SubspaceDecomposition(r, theta[:r].copy(), q)

        if matvecs >= max_iter:
            raise ConvergenceFailure(
                f"top_r_eigs: {matvecs} matvecs, worst residual {resid.max() / norm_est:.2e} > tol {tol:.1e}"
            )

        # thick restart: keep the leading Ritz vectors, continue from the
        # Krylov continuation direction orthogonal to the whole current basis
        cont = _orthogonalize(tv_k[:, -1], v_k)
        p = keep
        basis[:, :p] = v_k @ y[:, :p]
        images[:, :p] = tv_k @ y[:, :p]
        basis[:, p:] = 0.0
        images[:, p:] = 0.0
        width = p
        nxt = cont if np.linalg.norm(cont) > 0 else random_vector()
