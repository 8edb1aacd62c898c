"""Toeplitz ESPRIT: dominant eigenspace -> shift invariance -> unit-circle nodes -> intensities."""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from enum import Enum

import numpy as np

from . import dense_linalg as dl
from .errors import InvalidRank, RankDeficient, RankDeficientUpBlock, SolverFailure
from .fast_toeplitz import HermitianToeplitz, top_r_eigs
from .signal_model import MeasurementSeries

UP_BLOCK_RCOND = 1e-10


class Solver(str, Enum):
    DENSE = "dense"
    FAST = "fast"


@dataclass(frozen=True)
class EstimationResult:
    z_hat: np.ndarray
    mu_hat: np.ndarray
    w_eigenvalues: np.ndarray
    solver_used: Solver
    wall_time: float
    diagnostics: dict = field(default_factory=dict)

    @property
    def args(self) -> np.ndarray:
        return np.mod(np.angle(self.z_hat), 2 * np.pi)

    @property
    def locations(self) -> np.ndarray:
        """Recovered locations as fractions of a cycle in ``[0, 1)``."""
        return np.mod(self.args / (2 * np.pi), 1.0)


@dataclass(frozen=True)
class IntensityFit:
    mu: np.ndarray
    mu_complex: np.ndarray
    imag_residual: float
    clamped: float


def _as_series(g) -> MeasurementSeries:
    return g if isinstance(g, MeasurementSeries) else MeasurementSeries(g)


def toeplitz_from_signal(g) -> HermitianToeplitz:
    """``Toep(g)``: first column ``(Re g_0, g_1, ..., g_{n-1})``, upper triangle conjugated."""
    return HermitianToeplitz(_as_series(g).samples)


def vandermonde(z, n: int) -> np.ndarray:
    """n x k matrix whose column j is ``(1, z_j, ..., z_j^(n-1))``."""
    z = np.asarray(z, dtype=np.complex128).reshape(-1)
    if n < 1:
        raise ValueError("n must be >= 1")
    return z[None, :] ** np.arange(n)[:, None]


def intensity_fit(z_hat, g) -> IntensityFit:
    g = _as_series(g)
    z_hat = np.asarray(z_hat, dtype=np.complex128)
    if z_hat.size > g.n:
        raise RankDeficient(f"{z_hat.size} nodes but only {g.n} samples")
    v = vandermonde(z_hat, g.n)
    mu_c = dl.pinv_solve(v, g.samples)
    mu = mu_c.real.copy()
    negative = mu < 0
    clamped = float(-mu[negative].sum()) if negative.any() else 0.0
    mu[negative] = 0.0
    return IntensityFit(mu, mu_c, float(np.abs(mu_c.imag).max(initial=0.0)), clamped)


def estimate_intensities(z_hat, g) -> np.ndarray:
    """Least-squares intensities ``Re(V_n(z_hat)^+ g)``, negatives clamped to 0."""
    return intensity_fit(z_hat, g).mu


def _sort_by_arg(lam: np.ndarray) -> np.ndarray:
    args = np.mod(np.angle(lam), 2 * np.pi)
    # ties in arg broken by ascending modulus
    return lam[np.lexsort((np.abs(lam), args))]


def run(g, r: int, solver: Solver | str = Solver.DENSE, seed: int = 0, tol: float = 1e-11) -> EstimationResult:
    """Estimate ``r`` dominant locations and intensities from samples ``g``."""
    t0 = time.perf_counter()
    g = _as_series(g)
    solver = Solver(solver)
    n = g.n
    if not 1 <= r <= n - 1:
        raise InvalidRank(f"r={r} must satisfy 1 <= r <= n-1={n - 1}")
    if not np.any(g.samples):
        raise SolverFailure("all-zero signal has no dominant eigenspace")

    t_hat = toeplitz_from_signal(g)
    if solver is Solver.DENSE:
        block = dl.top_block(t_hat.dense(), r)
    else:
        block = top_r_eigs(t_hat, r, tol=tol, seed=seed)
    q = block.q_r

    q_up, q_down = q[:-1], q[1:]
    s = dl.singular_values(q_up)
    if s[-1] <= UP_BLOCK_RCOND * s[0]:
        raise RankDeficientUpBlock(f"sigma_min/sigma_max of the up block is {s[-1] / s[0]:.2e}")
    w = dl.pinv_solve(q_up, q_down)
    lam = _sort_by_arg(dl.general_eig_small(w))

    degenerate = bool(np.any(lam == 0))
    z_hat = np.exp(1j * np.mod(np.angle(lam), 2 * np.pi))

    try:
        fit = intensity_fit(z_hat, g)
    except RankDeficient as exc:
        raise SolverFailure(f"coincident location estimates: {exc}") from exc

    diagnostics = {
        "eigenvalues": block.values.tolist(),
        "discarded_imag_g0": t_hat.discarded_imag,
        "lambda_modulus": np.abs(lam).tolist(),
        "mu_imag_residual": fit.imag_residual,
        "mu_clamped": fit.clamped,
        "degenerate": degenerate,
        "up_block_cond": float(s[0] / s[-1]),
    }
    return EstimationResult(z_hat, fit.mu, lam, solver, time.perf_counter() - t0, diagnostics)
