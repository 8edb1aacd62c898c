"""Executable checks for the linear-algebra facts ESPRIT's error analysis rests on.

Each ``*_check`` evaluates both sides of one inequality on concrete matrices and
returns an :class:`OracleCheck`; the ``*_suite`` functions run seeded batches and
summarize them as :class:`SuiteReport` (the JSON emitted by ``espritkit verify``).
"""

from __future__ import annotations

import itertools
import math
from dataclasses import asdict, dataclass, field

import numpy as np

from . import dense_linalg as dl
from . import kernels
from .errors import GapNonpositive, NearCoincident, OracleViolation, PreconditionViolated, TooLarge
from .esprit import toeplitz_from_signal, vandermonde
from .fast_toeplitz import HermitianToeplitz, top_r_eigs
from .signal_model import SpectralMeasure, matching_distance, separation, synthesize, tail_mass

__all__ = [
    "vandermonde",
    "OracleCheck",
    "SuiteReport",
    "MoitraReport",
    "ErrorDecomposition",
    "moitra_bounds_check",
    "error_matrices",
    "toeplitz_norm",
    "weyl_check",
    "ostrowski_check",
    "davis_kahan_check",
    "distance_from_angles_check",
    "bauer_fike_check",
    "pinv_perturbation_check",
    "perturbation_oracles",
    "schur_mm0",
    "schur_bialternant",
    "contour_A",
    "tv_lower_bound_demo",
    "SUITES",
    "run_suite",
]

ORACLE_TOL = 1e-8
SCHUR_ENUM_CAP = 10**7


@dataclass(frozen=True)
class OracleCheck:
    name: str
    lhs: float
    rhs: float
    tol: float = ORACLE_TOL
    skipped: bool = False

    @property
    def slack(self) -> float:
        return self.rhs - self.lhs

    @property
    def passed(self) -> bool:
        return self.skipped or self.lhs <= self.rhs + self.tol


@dataclass
class SuiteReport:
    oracle_name: str
    instances: int = 0
    failures: int = 0
    worst_slack: float = math.inf
    skipped: int = 0
    extra: dict = field(default_factory=dict)

    def record(self, check: OracleCheck):
        if check.skipped:
            self.skipped += 1
            return
        self.instances += 1
        if not check.passed:
            self.failures += 1
        self.worst_slack = min(self.worst_slack, float(check.slack))

    def to_dict(self) -> dict:
        d = asdict(self)
        if not self.extra:
            d.pop("extra")
        if math.isinf(d["worst_slack"]):
            d["worst_slack"] = None
        return d


# ---------------------------------------------------------------------------
# Vandermonde conditioning
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class MoitraReport:
    n: int
    delta: float
    sigma_max: float
    sigma_min: float
    upper_bound: float
    lower_bound: float
    gram_deviation: float
    gram_bound: float

    @property
    def upper_ok(self) -> bool:
        return self.sigma_max <= self.upper_bound

    @property
    def lower_ok(self) -> bool:
        return self.sigma_min >= self.lower_bound


def moitra_bounds_check(z, n: int) -> MoitraReport:
    """Singular values of ``V_n(z)`` against ``sqrt(n - 1 +- 2 pi / delta)``.

    ``delta`` is the minimum pairwise distance of the nodes; needs at least two
    nodes and ``n > 1 + 2 pi / delta``.
    """
    z = np.asarray(z, dtype=np.complex128).reshape(-1)
    if z.size < 2:
        raise PreconditionViolated("need at least two nodes to define a separation")
    if np.max(np.abs(np.abs(z) - 1.0)) > 1e-12:
        raise PreconditionViolated("nodes must lie on the unit circle")
    diff = np.abs(z[:, None] - z[None, :])
    delta = float(diff[~np.eye(z.size, dtype=bool)].min())
    if delta == 0.0:
        raise PreconditionViolated("nodes must be pairwise distinct")
    if not n > 1 + 2 * math.pi / delta:
        raise PreconditionViolated(f"n={n} <= 1 + 2pi/delta = {1 + 2 * math.pi / delta:.4g}")
    v = vandermonde(z, n)
    _, s, _ = dl.small_svd(v)
    gram = v.conj().T @ v / n - np.eye(z.size)
    return MoitraReport(
        n=n,
        delta=delta,
        sigma_max=float(s[0]),
        sigma_min=float(s[-1]),
        upper_bound=math.sqrt(n - 1 + 2 * math.pi / delta),
        lower_bound=math.sqrt(n - 1 - 2 * math.pi / delta),
        gram_deviation=dl.hermitian_norm(gram),
        gram_bound=2 * math.pi / (delta * n),
    )


# ---------------------------------------------------------------------------
# Error matrices
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ErrorDecomposition:
    t_clean: HermitianToeplitz
    e_tail: HermitianToeplitz
    e_random: HermitianToeplitz
    t_hat: HermitianToeplitz
    norms: dict


def toeplitz_norm(t: HermitianToeplitz) -> float:
    """``||T||_2`` from the extreme eigenvalues via the FFT-backed Krylov solver."""
    if t.n < 2:
        return float(abs(t.first_col[0].real))
    hi = top_r_eigs(t, 1).values[0]
    lo = -top_r_eigs(HermitianToeplitz(-t.first_col), 1).values[0]
    return float(max(abs(hi), abs(lo)))


def _toeplitz_of_nodes(z: np.ndarray, mu: np.ndarray, n: int) -> HermitianToeplitz:
    # V diag(mu) V^H is Toeplitz with first column sum_i mu_i z_i^k
    if z.size == 0:
        return HermitianToeplitz(np.zeros(n, dtype=np.complex128))
    return HermitianToeplitz(vandermonde(z, n) @ mu)


def error_matrices(m: SpectralMeasure, noise, n: int) -> ErrorDecomposition:
    """Split ``Toep(g)`` into clean part, tail bias and random noise.

    Always verifies ``||E_tail||_2 <= n * mu_tail``.
    """
    noise = np.asarray(noise, dtype=np.complex128).reshape(-1)
    if noise.size != n:
        raise ValueError(f"noise has length {noise.size}, expected {n}")
    t_clean = _toeplitz_of_nodes(m.z_dom, m.mu_dom, n)
    e_tail = _toeplitz_of_nodes(m.z_tail, m.mu_tail, n)
    e_random = HermitianToeplitz(noise)
    t_hat = toeplitz_from_signal(synthesize(m, n).samples + noise)

    e_tail_norm = dl.hermitian_norm(e_tail.dense())
    bound = n * tail_mass(m)
    if e_tail_norm > bound + 1e-8:
        raise OracleViolation(f"||E_tail|| = {e_tail_norm:.6g} exceeds n*mu_tail = {bound:.6g}")
    q_r = dl.top_block(t_clean.dense(), m.r).q_r
    norms = {
        "e_tail": e_tail_norm,
        "e_random": dl.hermitian_norm(e_random.dense()),
        "e_tail_q_r": float(dl.singular_values(e_tail.dense() @ q_r)[0]),
        "tail_bound": bound,
        "tail_q_r_scale": tail_mass(m) / separation(m) if m.d > m.r else 0.0,
    }
    return ErrorDecomposition(t_clean, e_tail, e_random, t_hat, norms)


# ---------------------------------------------------------------------------
# Perturbation inequalities
# ---------------------------------------------------------------------------

def _herm(a) -> np.ndarray:
    a = dl.as_matrix(a)
    return 0.5 * (a + a.conj().T)


def weyl_check(a, e, tol: float = ORACLE_TOL) -> OracleCheck:
    """``|lambda_i(A+E) - lambda_i(A)| <= ||E||_2`` for all i."""
    a, e = _herm(a), _herm(e)
    la = dl.hermitian_eigvals(a)
    lae = dl.hermitian_eigvals(a + e)
    e_norm = dl.hermitian_norm(e)
    scale = max(1.0, dl.hermitian_norm(a), e_norm)
    return OracleCheck("weyl", float(np.max(np.abs(lae - la))), e_norm, tol * scale)


def ostrowski_check(a, b, tol: float = ORACLE_TOL) -> OracleCheck:
    """Nonzero eigenvalues of ``B A B^H`` are ``theta_i lambda_i(A)`` with
    ``theta_i in [sigma_min(B)^2, sigma_max(B)^2]``.

    Positive and negative eigenvalues are paired separately (Sylvester inertia).
    The reported lhs/rhs is the worst violation distance vs 0.
    """
    a = _herm(a)
    b = dl.as_matrix(b)
    r = a.shape[0]
    if b.shape[1] != r:
        raise ValueError("B must have as many columns as A has rows")
    s = dl.singular_values(b)
    if s[-1] <= 1e-12 * s[0]:
        raise PreconditionViolated("B must have full column rank")
    smin2, smax2 = s[-1] ** 2, s[0] ** 2
    la = dl.hermitian_eigvals(a)
    lb = dl.hermitian_eigvals(b @ a @ b.conj().T)
    pos_a = la[la > 0]
    neg_a = la[la < 0]
    n_pos, n_neg = pos_a.size, neg_a.size
    pos_b = lb[:n_pos]
    neg_b = lb[lb.size - n_neg:] if n_neg else lb[:0]
    lo = np.concatenate([smin2 * pos_a, smax2 * neg_a])
    hi = np.concatenate([smax2 * pos_a, smin2 * neg_a])
    got = np.concatenate([pos_b, neg_b])
    violation = float(np.max(np.maximum(lo - got, got - hi), initial=-math.inf))
    scale = max(1.0, smax2 * float(np.max(np.abs(la))))
    return OracleCheck("ostrowski", violation, 0.0, tol * scale)


def davis_kahan_check(a, e, r: int, tol: float = ORACLE_TOL) -> OracleCheck:
    """``sin theta(Q_r, Qhat_r) <= ||E Q_r||_2 / (lambda_r(A) - lambda_{r+1}(A+E))``.

    Raises :class:`GapNonpositive` when the denominator is not positive.
    """
    a, e = _herm(a), _herm(e)
    ea = dl.hermitian_eig(a)
    eh = dl.hermitian_eig(a + e)
    gap = ea.values[r - 1] - eh.values[r]
    if gap <= 0:
        raise GapNonpositive(f"lambda_r(A) - lambda_(r+1)(A+E) = {gap:.3e}")
    q_r = ea.vectors[:, :r]
    lhs = dl.sin_theta(q_r, eh.vectors[:, :r])
    rhs = float(dl.singular_values(e @ q_r)[0]) / gap
    return OracleCheck("davis_kahan", lhs, rhs, tol)


def distance_from_angles_check(q, qhat, tol: float = ORACLE_TOL) -> OracleCheck:
    """``||Qhat - Q U||_2 <= 2 sin theta(Q, Qhat)`` with ``U`` the Procrustes rotation."""
    u = dl.procrustes_align(q, qhat, check=False)
    lhs = float(dl.singular_values(dl.as_matrix(qhat) - dl.as_matrix(q) @ u)[0])
    rhs = 2.0 * dl.sin_theta(q, qhat)
    return OracleCheck("distance_from_angles", lhs, rhs, tol)


def bauer_fike_check(v, lam, e, tol: float = ORACLE_TOL) -> tuple[OracleCheck, OracleCheck]:
    """Bauer-Fike for ``A = V diag(lam) V^{-1}``: the per-eigenvalue bound and the
    matching-distance bound with the ``2r - 1`` factor."""
    v = dl.as_matrix(v)
    lam = np.asarray(lam, dtype=np.complex128)
    e = dl.as_matrix(e)
    r = lam.size
    a = v @ np.diag(lam) @ np.linalg.inv(v)
    lam_hat = dl.general_eig_small(a + e)
    s = dl.singular_values(v)
    kappa_e = float(s[0] / s[-1]) * float(dl.singular_values(e)[0])
    per_eig = float(np.max(np.min(np.abs(lam_hat[:, None] - lam[None, :]), axis=1)))
    md, _ = matching_distance(lam, lam_hat)
    scale = max(1.0, float(np.max(np.abs(lam))))
    return (
        OracleCheck("bauer_fike", per_eig, kappa_e, tol * scale),
        OracleCheck("bauer_fike_md", md, (2 * r - 1) * kappa_e, tol * scale),
    )


def pinv_perturbation_check(a, e, tol: float = ORACLE_TOL) -> OracleCheck:
    """``||(A+E)^+ - A^+|| <= 3 ||A^+||^2 ||E|| / (1 - ||A^+|| ||E||)`` when ``||E|| < sigma_min(A)``."""
    a = dl.as_matrix(a)
    e = dl.as_matrix(e)
    s = dl.singular_values(a)
    e_norm = float(dl.singular_values(e)[0])
    if not e_norm < s[-1]:
        raise PreconditionViolated("||E|| must be below sigma_min(A)")
    a_pinv_norm = 1.0 / s[-1]
    lhs = float(dl.singular_values(dl.pinv(a + e) - dl.pinv(a))[0])
    rhs = 3 * a_pinv_norm**2 * e_norm / (1 - a_pinv_norm * e_norm)
    return OracleCheck("pinv_perturbation", lhs, rhs, tol * max(1.0, a_pinv_norm))


def perturbation_oracles(a, e, r: int, tol: float = ORACLE_TOL) -> dict[str, OracleCheck]:
    """Weyl, Davis-Kahan and distance-from-angles on one Hermitian pair ``(A, A+E)``."""
    out = {"weyl": weyl_check(a, e, tol)}
    ea = dl.hermitian_eig(_herm(a))
    eh = dl.hermitian_eig(_herm(a) + _herm(e))
    try:
        out["davis_kahan"] = davis_kahan_check(a, e, r, tol)
    except GapNonpositive:
        out["davis_kahan"] = OracleCheck("davis_kahan", math.nan, math.nan, tol, skipped=True)
    out["distance_from_angles"] = distance_from_angles_check(ea.vectors[:, :r], eh.vectors[:, :r], tol)
    return out


# ---------------------------------------------------------------------------
# Schur polynomials and the resolvent contour integral
# ---------------------------------------------------------------------------

def schur_mm0(m: int, ell: int, x):
    """``s_(m,...,m,0)(x_1..x_ell)`` as the sum over ``beta in {0..m}^ell`` with
    ``|beta|_1 = (ell - 1) m`` of ``prod x_i^beta_i``.

    Integer inputs are summed exactly in Python integers; floats go through the
    enumeration kernel. ``ell = 1`` gives 1 (empty partition); ``m = -1`` with
    ``ell >= 2`` gives 0 (empty index set).
    """
    x = list(x) if not isinstance(x, np.ndarray) else x
    if len(x) != ell:
        raise ValueError(f"expected {ell} arguments, got {len(x)}")
    if ell < 1 or m < -1:
        raise ValueError("need ell >= 1 and m >= -1")
    if ell == 1:
        return 1
    if m == -1:
        return 0
    if (m + 1) ** ell > SCHUR_ENUM_CAP:
        raise TooLarge(f"(m+1)^ell = {(m + 1) ** ell} exceeds the enumeration cap")
    if all(isinstance(v, (int, np.integer)) and not isinstance(v, bool) for v in x):
        xs = [int(v) for v in x]
        target = (ell - 1) * m
        total = 0
        for beta in itertools.product(range(m + 1), repeat=ell):
            if sum(beta) == target:
                term = 1
                for xi, b in zip(xs, beta):
                    term *= xi**b
                total += term
        return total
    return kernels.schur_mm0_float(m, np.asarray(x, dtype=np.float64))


def schur_bialternant(gamma, x) -> float:
    """``s_gamma(x)`` as a ratio of alternants ``det[x_j^(gamma_i + ell - i)] / det[x_j^(ell - i)]``."""
    x = np.asarray(x, dtype=np.float64)
    ell = x.size
    gamma = np.asarray(gamma, dtype=np.int64)
    exps_num = gamma + np.arange(ell - 1, -1, -1)
    exps_den = np.arange(ell - 1, -1, -1)
    num = np.linalg.det(x[None, :] ** exps_num[:, None])
    den = np.linalg.det(x[None, :] ** exps_den[:, None])
    return float(num / den)


def _check_distinct(lams: np.ndarray, rel_gap: float):
    if lams.size < 2:
        return
    d = np.abs(lams[:, None] - lams[None, :])
    np.fill_diagonal(d, np.inf)
    if d.min() < rel_gap * np.max(np.abs(lams)):
        raise NearCoincident(f"eigenvalue gap {d.min():.2e} below {rel_gap:g} * max|lambda|")


def contour_A(m: int, lambdas, mode: str = "residue", rel_gap: float = 1e-6) -> float:
    """``(1/2 pi i) oint dzeta / (prod_j (zeta - lambda_j) zeta^(m+1))`` around the lambdas only.

    ``mode="residue"`` sums the simple-pole residues; ``mode="schur"`` uses
    ``(-1)^(ell-1) s_(m..m,0)(lambda) / prod lambda^(m+1)``.
    """
    lams = np.asarray(lambdas, dtype=np.float64).reshape(-1)
    ell = lams.size
    if ell < 1:
        raise ValueError("need at least one lambda")
    if m < -1:
        raise ValueError("m must be >= -1")
    if np.any(lams <= 0):
        raise ValueError("lambdas must be positive")
    if mode == "residue":
        _check_distinct(lams, rel_gap)
        total = 0.0
        for j in range(ell):
            others = np.delete(lams, j)
            total += 1.0 / (lams[j] ** (m + 1) * np.prod(lams[j] - others))
        return float(total)
    if mode == "schur":
        s = schur_mm0(m, ell, lams)
        return float((-1) ** (ell - 1) * s / np.prod(lams ** (m + 1)))
    raise ValueError(f"unknown mode {mode!r}")


# ---------------------------------------------------------------------------
# Lower-bound construction
# ---------------------------------------------------------------------------

def tv_lower_bound_demo(n: int, eps: float) -> dict:
    """Squared distance ``sum_{j=1..n} 4 sin^2(j eps)`` between the two hypotheses'
    mean vectors, the implied TV bound (its square root) and its ratio to ``n^3 eps^2``."""
    if n < 1 or not eps > 0:
        raise ValueError("need n >= 1 and eps > 0")
    j = np.arange(1, n + 1, dtype=np.float64)
    sq = float(np.sum(4.0 * np.sin(j * eps) ** 2))
    return {
        "n": n,
        "eps": eps,
        "sum_sq": sq,
        "tv_bound": math.sqrt(sq),
        "ratio_n3eps2": sq / (n**3 * eps**2),
    }


# ---------------------------------------------------------------------------
# Seeded suites
# ---------------------------------------------------------------------------

def _rng(seed: int) -> np.random.Generator:
    return np.random.Generator(np.random.Philox(int(seed)))


def _crandn(rng, *shape) -> np.ndarray:
    return (rng.standard_normal(shape) + 1j * rng.standard_normal(shape)) / math.sqrt(2)


def _random_unitary(rng, n: int) -> np.ndarray:
    q, rr = np.linalg.qr(_crandn(rng, n, n))
    d = np.diag(rr)
    return q * (d / np.abs(d))[None, :]


def random_separated_nodes(rng, k: int, min_sep: float, max_tries: int = 10_000) -> np.ndarray:
    """k unit-circle nodes with pairwise chordal distance >= ``min_sep`` (rejection sampling)."""
    for _ in range(max_tries):
        f = rng.random(k)
        d = 2 * np.abs(np.sin(np.pi * (f[:, None] - f[None, :])))
        np.fill_diagonal(d, np.inf)
        if d.min() >= min_sep:
            return np.exp(2j * np.pi * f)
    raise RuntimeError("could not place separated nodes")


def moitra_suite(instances: int = 100, n: int = 128, min_sep: float = 0.1, seed: int = 1, slack: float = 1.01,
                 tol_shift: float = 0.0) -> SuiteReport:
    rep = SuiteReport("moitra")
    rng = _rng(seed)
    for _ in range(instances):
        k = int(rng.integers(2, 6))
        z = random_separated_nodes(rng, k, min_sep)
        mr = moitra_bounds_check(z, n)
        checks = [
            OracleCheck("moitra_upper", mr.sigma_max, mr.upper_bound - tol_shift, 0.0),
            OracleCheck("moitra_lower", -mr.sigma_min, -mr.lower_bound - tol_shift, 0.0),
            OracleCheck("moitra_gram", mr.gram_deviation, slack * mr.gram_bound - tol_shift, 0.0),
        ]
        worst = min(checks, key=lambda c: (c.passed, c.slack))
        rep.record(worst)
    return rep


def _hermitian_with_gap(rng, n: int, r: int) -> np.ndarray:
    top = rng.uniform(5.0, 10.0, r)
    rest = rng.uniform(-2.0, 2.0, n - r)
    u = _random_unitary(rng, n)
    return (u * np.concatenate([top, rest])[None, :]) @ u.conj().T


def _random_hermitian(rng, n: int, norm: float) -> np.ndarray:
    e = _crandn(rng, n, n)
    e = 0.5 * (e + e.conj().T)
    return e * (norm / dl.hermitian_norm(e))


def perturbation_suite(instances: int = 200, n_max: int = 16, seed: int = 2, tol_shift: float = 0.0) -> list[SuiteReport]:
    """``instances`` seeded cases per theorem, dimensions up to ``n_max``.

    ``tol_shift`` is subtracted from every right-hand side; it exists so tests can
    confirm that a broken tolerance is actually reported as failures.
    """
    rng = _rng(seed)
    names = ["weyl", "ostrowski", "davis_kahan", "distance_from_angles", "bauer_fike", "bauer_fike_md", "pinv_perturbation"]
    reports = {k: SuiteReport(k) for k in names}

    def rec(check: OracleCheck):
        if tol_shift:
            check = OracleCheck(check.name, check.lhs, check.rhs - tol_shift, check.tol, check.skipped)
        reports[check.name].record(check)

    for _ in range(instances):
        n = int(rng.integers(3, n_max + 1))
        r = int(rng.integers(1, n))
        a = _hermitian_with_gap(rng, n, r)
        e = _random_hermitian(rng, n, rng.uniform(0.0, 1.5))
        rec(weyl_check(a, e))
        try:
            rec(davis_kahan_check(a, e, r))
        except GapNonpositive:
            reports["davis_kahan"].skipped += 1
        ea = dl.hermitian_eig(a)
        eh = dl.hermitian_eig(a + e)
        rec(distance_from_angles_check(ea.vectors[:, :r], eh.vectors[:, :r]))

        # Ostrowski: Hermitian nonsingular r x r A, full-column-rank n x r B
        rr = int(rng.integers(1, n + 1))
        diag = rng.uniform(0.2, 3.0, rr) * rng.choice([-1.0, 1.0], rr)
        ua = _random_unitary(rng, rr)
        a_small = (ua * diag[None, :]) @ ua.conj().T
        b = _crandn(rng, n, rr)
        rec(ostrowski_check(a_small, b))

        # Bauer-Fike: diagonalizable by construction, r <= 4
        k = int(rng.integers(1, 5))
        v = np.eye(k) + 0.5 * _crandn(rng, k, k)
        while dl.singular_values(v)[-1] < 0.05:
            v = np.eye(k) + 0.5 * _crandn(rng, k, k)
        lam = _crandn(rng, k) * 2.0
        ek = _crandn(rng, k, k) * rng.uniform(1e-4, 0.3)
        for c in bauer_fike_check(v, lam, ek):
            rec(c)

        # pseudoinverse perturbation: tall full-column-rank A, ||E|| < sigma_min
        rows = int(rng.integers(2, n + 1))
        cols = int(rng.integers(1, rows + 1))
        am = _crandn(rng, rows, cols)
        smin = dl.singular_values(am)[-1]
        while smin < 1e-3:
            am = _crandn(rng, rows, cols)
            smin = dl.singular_values(am)[-1]
        em = _crandn(rng, rows, cols)
        em *= rng.uniform(0.0, 0.95) * smin / dl.singular_values(em)[0]
        rec(pinv_perturbation_check(am, em))

    return [reports[k] for k in names]


def schur_suite(tuples: int = 50, seed: int = 3, rel_tol: float = 1e-9, abs_tol: float = 1e-12,
                tol_shift: float = 0.0) -> list[SuiteReport]:
    """Residue sum vs Schur formula, plus the exact coefficient-sum identity."""
    rng = _rng(seed)
    ident = SuiteReport("schur_contour")
    for m in range(-1, 6):
        for ell in range(1, 5):
            for _ in range(tuples):
                while True:
                    lams = rng.uniform(0.5, 2.0, ell)
                    if ell == 1 or np.min(np.diff(np.sort(lams))) >= 0.05:
                        break
                res = contour_A(m, lams, "residue")
                sch = contour_A(m, lams, "schur")
                bound = rel_tol * abs(sch) if sch != 0 else abs_tol
                ident.record(OracleCheck("schur_contour", abs(res - sch), bound - tol_shift, 0.0))
    coeff = SuiteReport("schur_coefficient_sum")
    for m in range(0, 7):
        for ell in range(1, 6):
            got = schur_mm0(m, ell, [1] * ell)
            want = math.comb(m + ell - 1, ell - 1)
            coeff.record(OracleCheck("schur_coefficient_sum", float(abs(got - want)), -tol_shift, 0.0))
    return [ident, coeff]


def noise_norm_suite(trials: int = 20, ns=(256, 1024), alpha: float = 1.0, seed: int = 4,
                     window=(0.1, 10.0), tol_shift: float = 0.0) -> SuiteReport:
    """Ratio ``||Toep(E)||_2 / (alpha sqrt(n log n))`` must sit inside ``window``."""
    from .signal_model import NoiseKind, NoiseSpec, sample_noise

    rep = SuiteReport("noise_norm")
    ratios = {}
    ss = np.random.SeedSequence(seed)
    for n in ns:
        vals = []
        for child in ss.spawn(trials):
            spec = NoiseSpec(alpha, NoiseKind.COMPLEX_GAUSSIAN, int(child.generate_state(1, np.uint64)[0]))
            e = HermitianToeplitz(sample_noise(n, spec))
            ratio = toeplitz_norm(e) / (alpha * math.sqrt(n * math.log(n)))
            vals.append(ratio)
            lo, hi = window
            # distance inside the window on the tighter side
            rep.record(OracleCheck("noise_norm", max(lo - ratio, ratio - hi), -tol_shift, 0.0))
        ratios[n] = vals
    rep.extra = {
        "ratios": {str(n): [float(v) for v in vals] for n, vals in ratios.items()},
        "spread": {str(n): float(np.max(vals) - np.min(vals)) for n, vals in ratios.items()},
    }
    return rep


def lower_bound_suite(ns=(100, 1000, 10_000), exponent: float = 1.6, tol_shift: float = 0.0) -> SuiteReport:
    """TV bound with ``eps = n^-exponent`` must stay below ``2 n^1.5 eps`` and shrink with n."""
    rep = SuiteReport("lower_bound")
    prev = math.inf
    rows = []
    for n in ns:
        eps = n ** (-exponent)
        demo = tv_lower_bound_demo(n, eps)
        cap = 2 * n**1.5 * eps
        rep.record(OracleCheck("lower_bound", demo["tv_bound"], cap - tol_shift, 0.0))
        rep.record(OracleCheck("lower_bound_decreasing", demo["tv_bound"], prev - tol_shift, 0.0))
        prev = demo["tv_bound"]
        rows.append(demo)
    rep.extra = {"rows": rows}
    return rep


SUITES = ("moitra", "perturbation", "schur", "noise_norm", "lower_bound")


def run_suite(name: str, tol_shift: float = 0.0) -> list[SuiteReport]:
    """Run one named suite (or ``"all"``); returns one report per oracle."""
    if name == "all":
        out = []
        for s in SUITES:
            out.extend(run_suite(s, tol_shift))
        return out
    if name == "moitra":
        return [moitra_suite(tol_shift=tol_shift)]
    if name == "perturbation":
        return perturbation_suite(tol_shift=tol_shift)
    if name == "schur":
        return schur_suite(tol_shift=tol_shift)
    if name == "noise_norm":
        return [noise_norm_suite(tol_shift=tol_shift)]
    if name == "lower_bound":
        return [lower_bound_suite(tol_shift=tol_shift)]
    raise ValueError(f"unknown suite {name!r}")
