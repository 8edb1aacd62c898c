"""Hot numeric kernels, each with a numba path and a pure-numpy path.

The numba path is used when numba imports cleanly and the environment variable
``ESPRITKIT_DISABLE_NUMBA`` is unset (or ``0``). Both paths are always importable
under explicit names (``fft_numba`` / ``fft_numpy`` etc.) so the benchmark and the
test-suite can compare them in one process; the un-suffixed names dispatch on
:data:`USE_NUMBA`.

Kernels:

* radix-2 FFT (iterative, bit-reversed input, precomputed twiddles)
* bottleneck assignment by exhaustive lexicographic permutation search
* Schur polynomial ``s_(m,...,m,0)`` by enumeration of bounded compositions
* eigenvalues of a small complex matrix by Hessenberg reduction + shifted QR
"""

from __future__ import annotations

import itertools
import os
from functools import lru_cache

import numpy as np

from .errors import NotPowerOfTwo

_DISABLED = os.environ.get("ESPRITKIT_DISABLE_NUMBA", "0").strip().lower() not in ("", "0", "false", "no")

try:
    if _DISABLED:
        raise ImportError("numba disabled by ESPRITKIT_DISABLE_NUMBA")
    import numba

    HAVE_NUMBA = True
except ImportError:  # pragma: no cover - exercised only without numba
    numba = None
    HAVE_NUMBA = False

USE_NUMBA = HAVE_NUMBA


def _njit(func):
    """``numba.njit(cache=True)`` when numba is usable, identity otherwise."""
    if HAVE_NUMBA:
        return numba.njit(cache=True)(func)
    return func


def backend_name() -> str:
    return "numba" if USE_NUMBA else "numpy"


# ---------------------------------------------------------------------------
# FFT
# ---------------------------------------------------------------------------

def is_power_of_two(n: int) -> bool:
    return n >= 1 and (n & (n - 1)) == 0


@lru_cache(maxsize=64)
def _fft_tables(n: int):
    bits = n.bit_length() - 1
    idx = np.arange(n)
    rev = np.zeros(n, dtype=np.int64)
    for b in range(bits):
        rev |= ((idx >> b) & 1) << (bits - 1 - b)
    twiddles = np.exp(-2j * np.pi * np.arange(n // 2) / n)
    rev.setflags(write=False)
    twiddles.setflags(write=False)
    return rev, twiddles


@_njit
def _fft_radix2_nb(x, rev, twiddles):
    n = x.shape[0]
    out = np.empty(n, dtype=np.complex128)
    for i in range(n):
        out[i] = x[rev[i]]
    size = 2
    while size <= n:
        half = size // 2
        step = n // size
        for start in range(0, n, size):
            for k in range(half):
                w = twiddles[k * step]
                a = out[start + k]
                b = out[start + k + half] * w
                out[start + k] = a + b
                out[start + k + half] = a - b
        size *= 2
    return out


@_njit
def _fft_columns_nb(x, rev, twiddles):
    n, k = x.shape
    out = np.empty((n, k), dtype=np.complex128)
    col = np.empty(n, dtype=np.complex128)
    for j in range(k):
        for i in range(n):
            col[i] = x[i, j]
        out[:, j] = _fft_radix2_nb(col, rev, twiddles)
    return out


def _fft_radix2_np(x: np.ndarray, rev: np.ndarray, twiddles: np.ndarray) -> np.ndarray:
    # x: (n,) or (n, k); transforms along axis 0
    n = x.shape[0]
    tail = x.shape[1:]
    out = x[rev].astype(np.complex128, copy=True)
    size = 2
    while size <= n:
        half = size // 2
        w = twiddles[:: n // size].reshape((1, half) + (1,) * len(tail))
        blocks = out.reshape((n // size, size) + tail)
        a = blocks[:, :half]
        b = blocks[:, half:] * w
        out = np.concatenate([a + b, a - b], axis=1).reshape((n,) + tail)
        size *= 2
    return out


def _check_fft_input(x) -> np.ndarray:
    x = np.asarray(x, dtype=np.complex128)
    if x.ndim not in (1, 2):
        raise ValueError("fft expects a vector or a column block")
    if not is_power_of_two(x.shape[0]):
        raise NotPowerOfTwo(f"fft length {x.shape[0]} is not a power of two")
    return x


def fft_numba(x) -> np.ndarray:
    x = _check_fft_input(x)
    rev, tw = _fft_tables(x.shape[0])
    if x.ndim == 1:
        return _fft_radix2_nb(np.ascontiguousarray(x), rev, tw)
    return _fft_columns_nb(np.ascontiguousarray(x), rev, tw)


def fft_numpy(x) -> np.ndarray:
    x = _check_fft_input(x)
    rev, tw = _fft_tables(x.shape[0])
    return _fft_radix2_np(x, rev, tw)


def fft(x) -> np.ndarray:
    """Unnormalized forward DFT along axis 0; length must be a power of two."""
    if USE_NUMBA:
        return fft_numba(x)
    return fft_numpy(x)


def ifft(x) -> np.ndarray:
    """Inverse of :func:`fft` (carries the ``1/n`` factor)."""
    x = _check_fft_input(x)
    return np.conj(fft(np.conj(x))) / x.shape[0]


# ---------------------------------------------------------------------------
# Bottleneck assignment (optimal matching distance)
# ---------------------------------------------------------------------------

@_njit
def _bottleneck_perm_nb(cost):
    # Lexicographic enumeration; the first strict minimum wins, so the
    # chosen permutation is the lexicographically smallest optimum.
    r = cost.shape[0]
    perm = np.arange(r)
    best_perm = perm.copy()
    best = np.inf
    while True:
        worst = 0.0
        for i in range(r):
            c = cost[i, perm[i]]
            if c > worst:
                worst = c
                if worst >= best:
                    break
        if worst < best:
            best = worst
            best_perm[:] = perm
        # next permutation
        i = r - 2
        while i >= 0 and perm[i] >= perm[i + 1]:
            i -= 1
        if i < 0:
            break
        j = r - 1
        while perm[j] <= perm[i]:
            j -= 1
        tmp = perm[i]
        perm[i] = perm[j]
        perm[j] = tmp
        lo = i + 1
        hi = r - 1
        while lo < hi:
            tmp = perm[lo]
            perm[lo] = perm[hi]
            perm[hi] = tmp
            lo += 1
            hi -= 1
    return best, best_perm


@lru_cache(maxsize=16)
def _permutation_table(r: int) -> np.ndarray:
    table = np.array(list(itertools.permutations(range(r))), dtype=np.int64).reshape(-1, r)
    table.setflags(write=False)
    return table


def bottleneck_perm_numba(cost: np.ndarray):
    cost = np.ascontiguousarray(cost, dtype=np.float64)
    if cost.shape[0] == 0:
        return 0.0, np.zeros(0, dtype=np.int64)
    best, perm = _bottleneck_perm_nb(cost)
    return float(best), perm


def bottleneck_perm_numpy(cost: np.ndarray):
    cost = np.asarray(cost, dtype=np.float64)
    r = cost.shape[0]
    if r == 0:
        return 0.0, np.zeros(0, dtype=np.int64)
    table = _permutation_table(r)
    worst = cost[np.arange(r), table].max(axis=1)
    k = int(np.argmin(worst))
    return float(worst[k]), table[k].copy()


def bottleneck_perm(cost: np.ndarray):
    """Return ``(min over perms of max_i cost[i, perm[i]], perm)``."""
    if USE_NUMBA:
        return bottleneck_perm_numba(cost)
    return bottleneck_perm_numpy(cost)


# ---------------------------------------------------------------------------
# Schur polynomial s_(m,...,m,0) by enumeration
# ---------------------------------------------------------------------------

@_njit
def _schur_mm0_nb(m, x):
    ell = x.shape[0]
    target = (ell - 1) * m
    beta = np.zeros(ell, dtype=np.int64)
    total = 0.0
    while True:
        s = 0
        for i in range(ell):
            s += beta[i]
        if s == target:
            term = 1.0
            for i in range(ell):
                term *= x[i] ** beta[i]
            total += term
        # odometer increment
        pos = 0
        while pos < ell:
            beta[pos] += 1
            if beta[pos] <= m:
                break
            beta[pos] = 0
            pos += 1
        if pos == ell:
            break
    return total


def schur_mm0_numba(m: int, x: np.ndarray) -> float:
    return float(_schur_mm0_nb(int(m), np.ascontiguousarray(x, dtype=np.float64)))


def schur_mm0_numpy(m: int, x: np.ndarray) -> float:
    x = np.asarray(x, dtype=np.float64)
    ell = x.shape[0]
    grid = np.indices((m + 1,) * ell).reshape(ell, -1)
    keep = grid[:, grid.sum(axis=0) == (ell - 1) * m]
    return float(np.prod(x[:, None] ** keep, axis=0).sum())


def schur_mm0_float(m: int, x: np.ndarray) -> float:
    """Float evaluation of ``sum_{beta in {0..m}^l, |beta|=(l-1)m} prod x^beta``."""
    if USE_NUMBA:
        return schur_mm0_numba(m, x)
    return schur_mm0_numpy(m, x)


# ---------------------------------------------------------------------------
# Small general eigenvalue problem: Hessenberg + shifted complex QR
# ---------------------------------------------------------------------------

def _hessenberg_qr_eigvals(a, max_iter):
    """Eigenvalues of a square complex matrix.

    Householder reduction to upper Hessenberg form, then explicit single-shift
    QR steps (Wilkinson shift, exceptional shifts every 10 stalled sweeps) with
    deflation on negligible subdiagonals. Only the active diagonal block is
    updated, since the eigenvector basis is not needed.

    Returns ``(eigenvalues, converged)``.
    """
    h = a.copy()
    n = h.shape[0]
    eps = 2.220446049250313e-16

    for k in range(n - 2):
        x = h[k + 1:, k].copy()
        xnorm = np.sqrt(np.sum(np.abs(x) ** 2))
        if xnorm == 0.0:
            continue
        x0 = x[0]
        ax0 = np.abs(x0)
        phase = x0 / ax0 if ax0 != 0.0 else 1.0 + 0.0j
        v = x
        v[0] = x0 + phase * xnorm
        v = v / np.sqrt(np.sum(np.abs(v) ** 2))
        vc = np.conj(v)
        for j in range(n):
            s = np.sum(vc * h[k + 1:, j])
            h[k + 1:, j] -= 2.0 * s * v
        for i in range(n):
            s = np.sum(h[i, k + 1:] * v)
            h[i, k + 1:] -= 2.0 * s * vc

    cs = np.zeros(n, dtype=np.float64)
    ss = np.zeros(n, dtype=np.complex128)
    hi = n - 1
    its = 0
    total = 0
    while hi >= 1:
        lo = hi
        while lo > 0:
            scale = np.abs(h[lo, lo]) + np.abs(h[lo - 1, lo - 1])
            if scale == 0.0:
                scale = 1.0
            if np.abs(h[lo, lo - 1]) <= eps * scale:
                h[lo, lo - 1] = 0.0
                break
            lo -= 1
        if lo == hi:
            hi -= 1
            its = 0
            continue
        if total >= max_iter:
            return np.diag(h).copy(), False
        its += 1
        total += 1

        if its % 10 == 0:
            mu = h[hi, hi] + 0.75 * np.abs(h[hi, hi - 1])
        else:
            p = h[hi - 1, hi - 1]
            q = h[hi - 1, hi]
            r = h[hi, hi - 1]
            d = h[hi, hi]
            half = 0.5 * (p - d)
            disc = np.sqrt(half * half + q * r)
            m1 = 0.5 * (p + d) + disc
            m2 = 0.5 * (p + d) - disc
            mu = m1 if np.abs(m1 - d) <= np.abs(m2 - d) else m2

        for i in range(lo, hi + 1):
            h[i, i] -= mu
        for k in range(lo, hi):
            f = h[k, k]
            g = h[k + 1, k]
            af = np.abs(f)
            ag = np.abs(g)
            nrm = np.sqrt(af * af + ag * ag)
            if nrm == 0.0:
                c = 1.0
                s = 0.0 + 0.0j
            elif af == 0.0:
                c = 0.0
                s = np.conj(g) / ag
            else:
                c = af / nrm
                s = (f / af) * np.conj(g) / nrm
            cs[k] = c
            ss[k] = s
            for j in range(k, hi + 1):
                t1 = h[k, j]
                t2 = h[k + 1, j]
                h[k, j] = c * t1 + s * t2
                h[k + 1, j] = -np.conj(s) * t1 + c * t2
        for k in range(lo, hi):
            c = cs[k]
            s = ss[k]
            for i in range(lo, k + 2):
                t1 = h[i, k]
                t2 = h[i, k + 1]
                h[i, k] = c * t1 + np.conj(s) * t2
                h[i, k + 1] = -s * t1 + c * t2
        for i in range(lo, hi + 1):
            h[i, i] += mu

    return np.diag(h).copy(), True


_hessenberg_qr_eigvals_nb = _njit(_hessenberg_qr_eigvals)


def small_eigvals_numba(a: np.ndarray, max_iter: int):
    return _hessenberg_qr_eigvals_nb(np.ascontiguousarray(a, dtype=np.complex128), int(max_iter))


def small_eigvals_numpy(a: np.ndarray, max_iter: int):
    return _hessenberg_qr_eigvals(np.array(a, dtype=np.complex128), int(max_iter))


def small_eigvals(a: np.ndarray, max_iter: int):
    if USE_NUMBA:
        return small_eigvals_numba(a, max_iter)
    return small_eigvals_numpy(a, max_iter)
