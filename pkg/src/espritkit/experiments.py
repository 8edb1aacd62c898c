"""Monte Carlo sweep over the cutoff n and log-log slope fits of the error."""

from __future__ import annotations

import csv
import json
import logging
import math
import os
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from enum import Enum
from pathlib import Path
from typing import NamedTuple

import numpy as np

from . import esprit
from .errors import ConfigInvalid, EspritKitError, InsufficientData
from .signal_model import (
    NoiseKind,
    NoiseSpec,
    SpectralMeasure,
    matching_distance,
    parse_measure_config,
    sample_noise,
    synthesize,
)

log = logging.getLogger(__name__)

FLOOR = 1e-8
CSV_COLUMNS = ("n", "trial", "md_z", "md_mu", "wall_ms", "failed")


class Statistic(str, Enum):
    MEDIAN = "median"
    MEAN = "mean"

    def __call__(self, values) -> float:
        return float(np.median(values) if self is Statistic.MEDIAN else np.mean(values))


@dataclass(frozen=True)
class ScalingConfig:
    measure: SpectralMeasure
    alpha: float
    n_grid: tuple
    trials: int
    base_seed: int = 0
    solver: esprit.Solver = esprit.Solver.FAST
    statistic: Statistic = Statistic.MEDIAN
    noise_kind: NoiseKind = NoiseKind.COMPLEX_GAUSSIAN

    def __post_init__(self):
        try:
            object.__setattr__(self, "solver", esprit.Solver(self.solver))
        except ValueError:
            raise ConfigInvalid(f"field 'solver' has unknown value {self.solver!r}") from None
        try:
            object.__setattr__(self, "statistic", Statistic(self.statistic))
        except ValueError:
            raise ConfigInvalid(f"field 'statistic' has unknown value {self.statistic!r}") from None
        try:
            object.__setattr__(self, "noise_kind", NoiseKind(self.noise_kind))
        except ValueError:
            raise ConfigInvalid(f"field 'noise_kind' has unknown value {self.noise_kind!r}") from None
        if isinstance(self.trials, bool) or not isinstance(self.trials, (int, np.integer)) or self.trials < 1:
            raise ConfigInvalid(f"field 'trials' must be an integer >= 1, got {self.trials!r}")
        if not isinstance(self.alpha, (int, float)) or isinstance(self.alpha, bool) or not self.alpha >= 0:
            raise ConfigInvalid(f"field 'alpha' must be a number >= 0, got {self.alpha!r}")
        grid = tuple(self.n_grid)
        if not grid:
            raise ConfigInvalid("field 'n_grid' is empty")
        for n in grid:
            if isinstance(n, bool) or not isinstance(n, (int, np.integer)) or n < 1 or n & (n - 1):
                raise ConfigInvalid(f"field 'n_grid' entry {n!r} is not a power of two")
            if n < self.measure.r + 2:
                raise ConfigInvalid(f"field 'n_grid' entry {n} is below r + 2 = {self.measure.r + 2}")
        if list(grid) != sorted(set(grid)):
            raise ConfigInvalid("field 'n_grid' must be strictly ascending")
        object.__setattr__(self, "n_grid", tuple(int(n) for n in grid))
        if not 0 <= int(self.base_seed) < 2**64:
            raise ConfigInvalid("field 'seed' must be an unsigned 64-bit integer")

    @property
    def effective_noise(self) -> NoiseKind:
        return NoiseKind.NONE if self.alpha == 0 else self.noise_kind


def parse_scaling_config(raw: dict) -> ScalingConfig:
    """Measure-config fields plus ``n_grid``, ``trials``, ``solver`` and ``statistic``."""
    mc = parse_measure_config(raw)
    if "n_grid" not in raw:
        raise ConfigInvalid("missing field 'n_grid'")
    if "trials" not in raw:
        raise ConfigInvalid("missing field 'trials'")
    if not isinstance(raw["n_grid"], list):
        raise ConfigInvalid("field 'n_grid' must be a list")
    return ScalingConfig(
        measure=mc.measure,
        alpha=mc.noise.alpha,
        n_grid=tuple(raw["n_grid"]),
        trials=raw["trials"],
        base_seed=mc.noise.seed,
        solver=raw.get("solver", "fast"),
        statistic=raw.get("statistic", "median"),
        noise_kind=mc.noise.kind,
    )


def load_scaling_config(path) -> ScalingConfig:
    try:
        raw = json.loads(Path(path).read_text())
    except json.JSONDecodeError as exc:
        raise ConfigInvalid(f"config is not valid JSON: {exc}") from exc
    return parse_scaling_config(raw)


@dataclass(frozen=True)
class ScalingRow:
    n: int
    trial: int
    md_z: float
    md_mu: float
    wall_ms: float
    failed: bool
    reason: str = ""


def trial_seed(base_seed: int, n: int, trial: int) -> int:
    """Noise seed for one (n, trial) cell; independent of the rest of the grid."""
    return int(np.random.SeedSequence([int(base_seed), int(n), int(trial)]).generate_state(1, np.uint64)[0])


def run_trial(cfg: ScalingConfig, n: int, trial: int) -> ScalingRow:
    m = cfg.measure
    t0 = time.perf_counter()
    spec = NoiseSpec(float(cfg.alpha), cfg.effective_noise, trial_seed(cfg.base_seed, n, trial))
    g = synthesize(m, n).samples + sample_noise(n, spec)
    try:
        res = esprit.run(g, m.r, solver=cfg.solver, seed=trial)
    except EspritKitError as exc:
        return ScalingRow(n, trial, math.nan, math.nan, (time.perf_counter() - t0) * 1e3, True, type(exc).__name__)
    wall = (time.perf_counter() - t0) * 1e3
    if res.diagnostics.get("degenerate"):
        return ScalingRow(n, trial, math.nan, math.nan, wall, True, "degenerate")
    md_z, perm = matching_distance(m.z_dom, res.z_hat)
    md_mu = float(np.max(np.abs(m.mu_dom - res.mu_hat[np.asarray(perm)])))
    return ScalingRow(n, trial, float(md_z), md_mu, wall, False)


def _run_chunk(args) -> list[ScalingRow]:
    cfg, cells = args
    return [run_trial(cfg, n, t) for n, t in cells]


def run_scaling(cfg: ScalingConfig, threads: int = 1) -> list[ScalingRow]:
    """All (n, trial) cells, ordered by (n, trial). ``threads > 1`` uses a process pool."""
    cells = [(n, t) for n in cfg.n_grid for t in range(cfg.trials)]
    threads = max(1, int(threads))
    if threads == 1 or len(cells) == 1:
        rows = []
        for n in cfg.n_grid:
            chunk = [run_trial(cfg, n, t) for t in range(cfg.trials)]
            log.info("n=%d: %d trials, %d failed", n, len(chunk), sum(r.failed for r in chunk))
            rows.extend(chunk)
    else:
        chunks = [cells[i::threads] for i in range(threads)]
        with ProcessPoolExecutor(max_workers=threads) as pool:
            rows = [r for part in pool.map(_run_chunk, [(cfg, c) for c in chunks if c]) for r in part]
    return sorted(rows, key=lambda r: (r.n, r.trial))


class SlopeFit(NamedTuple):
    slope: float
    intercept: float
    per_n: list

    @property
    def floor_reached(self) -> bool:
        return all(p["stat"] < FLOOR for p in self.per_n)


def fit_slope(rows, statistic: Statistic | str = Statistic.MEDIAN, key: str = "md_z") -> SlopeFit:
    """OLS of ``log2(stat(md))`` on ``log2(n)`` over the successful trials.

    When every per-n statistic is below 1e-8 the fit is meaningless; the slope
    and intercept come back as NaN and ``floor_reached`` is true.
    """
    statistic = Statistic(statistic)
    by_n: dict[int, list[float]] = {}
    for r in rows:
        if not r.failed:
            by_n.setdefault(int(r.n), []).append(float(getattr(r, key)))
    if len(by_n) < 3:
        raise InsufficientData(f"need >= 3 distinct n with a successful trial, have {len(by_n)}")
    ns = sorted(by_n)
    per_n = [{"n": n, "stat": statistic(by_n[n]), "count": len(by_n[n])} for n in ns]
    fit = SlopeFit(math.nan, math.nan, per_n)
    if fit.floor_reached:
        return fit
    stats = np.array([p["stat"] for p in per_n])
    if np.any(stats <= 0):
        raise InsufficientData("statistic is zero at some n; log-log fit undefined")
    x = np.log2(np.array(ns, dtype=np.float64))
    y = np.log2(stats)
    slope, intercept = np.polyfit(x, y, 1)
    return SlopeFit(float(slope), float(intercept), per_n)


def summarize(rows, statistic: Statistic | str = Statistic.MEDIAN) -> dict:
    statistic = Statistic(statistic)
    fz = fit_slope(rows, statistic, "md_z")
    fm = fit_slope(rows, statistic, "md_mu")
    per_n = [
        {"n": a["n"], f"{statistic.value}_md_z": a["stat"], f"{statistic.value}_md_mu": b["stat"], "successes": a["count"]}
        for a, b in zip(fz.per_n, fm.per_n)
    ]
    failures = sum(r.failed for r in rows)

    def num(v):
        return None if math.isnan(v) else v

    return {
        "slope_z": num(fz.slope),
        "slope_mu": num(fm.slope),
        "floor_reached": fz.floor_reached,
        "per_n": per_n,
        "failure_rate": failures / len(rows) if rows else 0.0,
    }


def write_csv(rows, path, timing: bool = True) -> None:
    """CSV with columns n,trial,md_z,md_mu,wall_ms,failed. ``timing=False`` writes
    wall_ms as 0 so repeated runs are byte-identical."""
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(CSV_COLUMNS)
        for r in rows:
            w.writerow([
                r.n,
                r.trial,
                repr(r.md_z),
                repr(r.md_mu),
                f"{r.wall_ms:.3f}" if timing else "0",
                int(r.failed),
            ])


def read_csv(path) -> list[ScalingRow]:
    with open(path, newline="") as fh:
        return [
            ScalingRow(int(d["n"]), int(d["trial"]), float(d["md_z"]), float(d["md_mu"]), float(d["wall_ms"]), bool(int(d["failed"])))
            for d in csv.DictReader(fh)
        ]


def default_threads() -> int:
    return os.cpu_count() or 1
