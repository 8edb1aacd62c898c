"""Spectral measures, measurement synthesis, noise, and matching-distance scoring.

A measure is ``mu = sum_i mu_i delta_{f_i}`` with locations ``f_i in [0, 1)``; its
nodes on the unit circle are ``z_i = exp(2 pi i f_i)`` and the (noiseless)
measurements are ``g_j = sum_i mu_i z_i**j`` for ``j = 0..n-1``.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from enum import Enum
from pathlib import Path

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import maximum_bipartite_matching

from . import kernels
from .errors import (
    ConfigInvalid,
    InvalidRank,
    LengthMismatch,
    NonPositiveIntensity,
    OutOfRangeLocation,
    SignalFormatError,
    TooLarge,
    ZeroSeparation,
)

EXHAUSTIVE_MATCH_LIMIT = 8


@dataclass(frozen=True)
class SpectralMeasure:
    """Point sources sorted by non-increasing intensity, normalized to unit mass.

    Build through :func:`new_measure`, which validates and normalizes.
    """

    locations: np.ndarray
    intensities: np.ndarray
    r: int

    @property
    def d(self) -> int:
        return int(self.locations.shape[0])

    @property
    def z(self) -> np.ndarray:
        return np.exp(2j * np.pi * self.locations)

    @property
    def z_dom(self) -> np.ndarray:
        return self.z[: self.r]

    @property
    def mu_dom(self) -> np.ndarray:
        return self.intensities[: self.r]

    @property
    def z_tail(self) -> np.ndarray:
        return self.z[self.r:]

    @property
    def mu_tail(self) -> np.ndarray:
        return self.intensities[self.r:]


class NoiseKind(str, Enum):
    COMPLEX_GAUSSIAN = "complex_gaussian"
    REAL_GAUSSIAN = "real_gaussian"
    NONE = "none"


@dataclass(frozen=True)
class NoiseSpec:
    alpha: float = 0.0
    kind: NoiseKind = NoiseKind.NONE
    seed: int = 0

    def __post_init__(self):
        if not (self.alpha >= 0.0 and math.isfinite(self.alpha)):
            raise ValueError(f"alpha must be finite and >= 0, got {self.alpha}")
        object.__setattr__(self, "kind", NoiseKind(self.kind))
        if not 0 <= int(self.seed) < 2**64:
            raise ValueError("seed must be an unsigned 64-bit integer")


@dataclass(frozen=True)
class MeasurementSeries:
    samples: np.ndarray

    def __post_init__(self):
        s = np.asarray(self.samples, dtype=np.complex128).reshape(-1)
        if s.size < 1:
            raise ValueError("a measurement series needs n >= 1 samples")
        object.__setattr__(self, "samples", s)

    @property
    def n(self) -> int:
        return int(self.samples.shape[0])

    def __add__(self, other):
        other = other.samples if isinstance(other, MeasurementSeries) else np.asarray(other)
        if other.shape != self.samples.shape:
            raise LengthMismatch("cannot add series of different lengths")
        return MeasurementSeries(self.samples + other)


def chord(f1, f2):
    """Chordal distance ``|exp(2 pi i f1) - exp(2 pi i f2)| = 2|sin(pi (f1 - f2))|``."""
    return 2.0 * np.abs(np.sin(np.pi * (np.asarray(f1) - np.asarray(f2))))


def _separation(locations: np.ndarray, r: int) -> float:
    d = locations.shape[0]
    if d < 2:
        return math.inf
    dist = chord(locations[:r, None], locations[None, :])
    mask = np.ones_like(dist, dtype=bool)
    mask[np.arange(r), np.arange(r)] = False
    return float(dist[mask].min())


def new_measure(f, mu, r: int) -> SpectralMeasure:
    """Validate, sort by descending intensity, and rescale to ``||mu||_1 = 1``."""
    f = np.asarray(f, dtype=np.float64).reshape(-1)
    mu = np.asarray(mu, dtype=np.float64).reshape(-1)
    if f.shape != mu.shape:
        raise LengthMismatch(f"{f.size} locations but {mu.size} intensities")
    if f.size == 0:
        raise LengthMismatch("a measure needs at least one source")
    if not np.all((f >= 0.0) & (f < 1.0)):
        raise OutOfRangeLocation("locations must lie in [0, 1)")
    if not np.all(mu > 0.0) or not np.all(np.isfinite(mu)):
        raise NonPositiveIntensity("intensities must be positive and finite")
    r = int(r)
    if not 1 <= r <= f.size:
        raise InvalidRank(f"r={r} must satisfy 1 <= r <= d={f.size}")

    order = np.argsort(-mu, kind="stable")
    f = f[order]
    mu = mu[order] / mu.sum()
    if _separation(f, r) == 0.0:
        raise ZeroSeparation("a dominant node coincides with another node")
    f.setflags(write=False)
    mu.setflags(write=False)
    return SpectralMeasure(f, mu, r)


def separation(m: SpectralMeasure) -> float:
    """Minimum chordal distance between a dominant node and any other node."""
    return _separation(m.locations, m.r)


def tail_mass(m: SpectralMeasure) -> float:
    return float(m.intensities[m.r:].sum())


def tail_condition_holds(m: SpectralMeasure) -> bool:
    """Whether the tail mass is at most one eighth of the r-th intensity."""
    return bool(tail_mass(m) <= m.intensities[m.r - 1] / 8.0)


def synthesize(m: SpectralMeasure, n: int) -> MeasurementSeries:
    """Noiseless samples ``g_j = sum_i mu_i exp(2 pi i f_i j)``."""
    if n < 1:
        raise ValueError("n must be >= 1")
    j = np.arange(n, dtype=np.float64)
    # reduce phases mod 1 before exponentiating to keep them accurate at large j
    phase = np.mod(np.outer(j, m.locations), 1.0)
    g = np.exp(2j * np.pi * phase) @ m.intensities
    g[0] = m.intensities.sum()
    return MeasurementSeries(g)


def sample_noise(n: int, spec: NoiseSpec) -> np.ndarray:
    """Draw ``E_0..E_{n-1}``; ``E_0`` is always real so ``Toep(g)`` stays Hermitian."""
    if n < 1:
        raise ValueError("n must be >= 1")
    if spec.kind is NoiseKind.NONE or spec.alpha == 0.0:
        return np.zeros(n, dtype=np.complex128)
    rng = np.random.Generator(np.random.Philox(int(spec.seed)))
    x = rng.standard_normal(n)
    if spec.kind is NoiseKind.REAL_GAUSSIAN:
        return (spec.alpha * x).astype(np.complex128)
    y = rng.standard_normal(n)
    e = spec.alpha * (x + 1j * y) / math.sqrt(2.0)
    e[0] = spec.alpha * x[0]
    return e


def observe(m: SpectralMeasure, n: int, spec: NoiseSpec) -> MeasurementSeries:
    return synthesize(m, n) + sample_noise(n, spec)


def _threshold_matching(cost: np.ndarray):
    # smallest threshold admitting a perfect matching in {cost <= t}
    r = cost.shape[0]
    levels = np.unique(cost)
    lo, hi = 0, levels.size - 1
    best = None
    while lo <= hi:
        mid = (lo + hi) // 2
        match = maximum_bipartite_matching(csr_matrix(cost <= levels[mid]), perm_type="column")
        if np.all(match >= 0):
            best = (levels[mid], match)
            hi = mid - 1
        else:
            lo = mid + 1
    t, match = best
    perm = np.asarray(match, dtype=np.int64)
    return float(cost[np.arange(r), perm].max()), perm


def matching_distance(a, b, allow_threshold: bool = False):
    """Optimal matching distance ``min_perm max_i |a_i - b_perm(i)|``.

    Returns ``(distance, perm)`` where ``a[i]`` is paired with ``b[perm[i]]``.
    Exhaustive up to 8 points; beyond that a threshold/bipartite-matching search
    is used only when ``allow_threshold`` is set.
    """
    a = np.asarray(a).reshape(-1)
    b = np.asarray(b).reshape(-1)
    if a.shape != b.shape:
        raise LengthMismatch(f"cannot match {a.size} points against {b.size}")
    cost = np.abs(a[:, None] - b[None, :])
    if a.size > EXHAUSTIVE_MATCH_LIMIT:
        if not allow_threshold:
            raise TooLarge(f"exhaustive matching limited to r <= {EXHAUSTIVE_MATCH_LIMIT}")
        return _threshold_matching(cost)
    return kernels.bottleneck_perm(cost)


# ---------------------------------------------------------------------------
# File formats
# ---------------------------------------------------------------------------

def write_signal(path, g: MeasurementSeries) -> None:
    lines = [str(g.n)]
    lines += [f"{v.real:.17g},{v.imag:.17g}" for v in g.samples]
    Path(path).write_text("\n".join(lines) + "\n")


def read_signal(path) -> MeasurementSeries:
    text = Path(path).read_text()
    lines = [ln.strip() for ln in text.splitlines() if ln.strip()]
    if not lines:
        raise SignalFormatError("empty signal file")
    try:
        n = int(lines[0])
    except ValueError:
        raise SignalFormatError(f"first line must be the sample count, got {lines[0]!r}") from None
    if n < 1:
        raise SignalFormatError("sample count must be >= 1")
    if len(lines) - 1 != n:
        raise SignalFormatError(f"header declares {n} samples, found {len(lines) - 1}")
    samples = np.empty(n, dtype=np.complex128)
    for k, ln in enumerate(lines[1:]):
        parts = ln.split(",")
        if len(parts) != 2:
            raise SignalFormatError(f"line {k + 2}: expected 're,im'")
        try:
            samples[k] = complex(float(parts[0]), float(parts[1]))
        except ValueError:
            raise SignalFormatError(f"line {k + 2}: not a number pair") from None
    if not np.all(np.isfinite(samples)):
        raise SignalFormatError("non-finite sample")
    return MeasurementSeries(samples)


@dataclass(frozen=True)
class MeasureConfig:
    """Parsed measure config: ``{locations, intensities, r, alpha, noise_kind, seed[, n]}``."""

    measure: SpectralMeasure
    noise: NoiseSpec
    n: int | None = None
    raw: dict = field(default_factory=dict, compare=False, repr=False)


def _require(raw: dict, key: str):
    if key not in raw:
        raise ConfigInvalid(f"missing field '{key}'")
    return raw[key]


def parse_measure_config(raw: dict) -> MeasureConfig:
    if not isinstance(raw, dict):
        raise ConfigInvalid("config must be a JSON object")
    locs = _require(raw, "locations")
    mus = _require(raw, "intensities")
    r = _require(raw, "r")
    if not isinstance(locs, list) or not isinstance(mus, list):
        raise ConfigInvalid("'locations' and 'intensities' must be lists")
    if not isinstance(r, int) or isinstance(r, bool):
        raise ConfigInvalid("field 'r' must be an integer")
    if not 1 <= r <= len(locs):
        raise ConfigInvalid(f"field 'r'={r} must satisfy 1 <= r <= d={len(locs)}")
    alpha = raw.get("alpha", 0.0)
    if not isinstance(alpha, (int, float)) or isinstance(alpha, bool) or not alpha >= 0:
        raise ConfigInvalid(f"field 'alpha' must be a number >= 0, got {alpha!r}")
    kind = raw.get("noise_kind", "none" if alpha == 0 else "complex_gaussian")
    try:
        kind = NoiseKind(kind)
    except ValueError:
        raise ConfigInvalid(f"field 'noise_kind' has unknown value {kind!r}") from None
    seed = raw.get("seed", 0)
    if not isinstance(seed, int) or isinstance(seed, bool) or not 0 <= seed < 2**64:
        raise ConfigInvalid("field 'seed' must be an unsigned 64-bit integer")
    n = raw.get("n")
    if n is not None and (not isinstance(n, int) or isinstance(n, bool) or n < 1):
        raise ConfigInvalid("field 'n' must be a positive integer")
    try:
        measure = new_measure(locs, mus, r)
    except (ValueError, TypeError) as exc:
        raise ConfigInvalid(f"invalid measure: {exc}") from exc
    return MeasureConfig(measure, NoiseSpec(float(alpha), kind, seed), n, dict(raw))


def load_measure_config(path) -> MeasureConfig:
    try:
        raw = json.loads(Path(path).read_text())
    except json.JSONDecodeError as exc:
        raise ConfigInvalid(f"config is not valid JSON: {exc}") from exc
    return parse_measure_config(raw)
