"""Numba vs pure-numpy kernels, and the fast vs dense ESPRIT path.

    python3 benchmarks/bench_backends.py [--dense-max 1024] [--repeat 5]

Each kernel is run once to warm the JIT cache, then timed as the best of
``--repeat`` runs. Results of the two backends are compared before timing.
"""

import argparse
import time

import numpy as np

from espritkit import esprit, kernels
from espritkit import signal_model as sm


def best_of(fn, repeat):
    fn()
    best = float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def row(name, t_nb, t_np):
    ratio = t_np / t_nb if t_nb > 0 else float("nan")
    print(f"{name:<34} {t_nb * 1e3:>10.3f} {t_np * 1e3:>10.3f} {ratio:>8.1f}x")


def kernel_table(repeat):
    rng = np.random.default_rng(0)
    print(f"{'kernel':<34} {'numba ms':>10} {'numpy ms':>10} {'speedup':>9}")
    for n in (256, 4096, 65536):
        x = rng.standard_normal(n) + 1j * rng.standard_normal(n)
        assert np.allclose(kernels.fft_numba(x), kernels.fft_numpy(x))
        row(f"fft n={n}", best_of(lambda: kernels.fft_numba(x), repeat), best_of(lambda: kernels.fft_numpy(x), repeat))
    xb = rng.standard_normal((4096, 6)) + 0j
    row("fft 4096 x 6 block", best_of(lambda: kernels.fft_numba(xb), repeat), best_of(lambda: kernels.fft_numpy(xb), repeat))
    for r in (5, 8):
        c = rng.random((r, r))
        assert kernels.bottleneck_perm_numba(c)[0] == kernels.bottleneck_perm_numpy(c)[0]
        row(f"bottleneck matching r={r}", best_of(lambda: kernels.bottleneck_perm_numba(c), repeat),
            best_of(lambda: kernels.bottleneck_perm_numpy(c), repeat))
    for m, ell in ((5, 4), (9, 6)):
        x = rng.uniform(0.5, 2.0, ell)
        row(f"schur enumeration m={m} l={ell}", best_of(lambda: kernels.schur_mm0_numba(m, x), repeat),
            best_of(lambda: kernels.schur_mm0_numpy(m, x), repeat))
    for k in (4, 16, 48):
        a = rng.standard_normal((k, k)) + 1j * rng.standard_normal((k, k))
        row(f"small eigvals r={k}", best_of(lambda: kernels.small_eigvals_numba(a, 30 * k + 30), repeat),
            best_of(lambda: kernels.small_eigvals_numpy(a, 30 * k + 30), repeat))


def solver_table(dense_max, repeat):
    m = sm.new_measure([0.1, 0.35], [0.6, 0.4], 2)
    print(f"\n{'ESPRIT r=2':<34} {'fast ms':>10} {'dense ms':>10} {'speedup':>9}")
    for n in (128, 256, 512, 1024, 2048):
        g = sm.observe(m, n, sm.NoiseSpec(0.5, sm.NoiseKind.COMPLEX_GAUSSIAN, n))
        t_fast = best_of(lambda: esprit.run(g, 2, solver="fast"), repeat)
        if n <= dense_max:
            t_dense = best_of(lambda: esprit.run(g, 2, solver="dense"), max(1, repeat // 2))
            print(f"{'n=' + str(n):<34} {t_fast * 1e3:>10.2f} {t_dense * 1e3:>10.2f} {t_dense / t_fast:>8.1f}x")
        else:
            print(f"{'n=' + str(n):<34} {t_fast * 1e3:>10.2f} {'skipped':>10}")


def main():
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--repeat", type=int, default=5)
    p.add_argument("--dense-max", type=int, default=1024, help="largest n for the dense solver")
    args = p.parse_args()
    if not kernels.HAVE_NUMBA:
        raise SystemExit("numba is not importable; nothing to compare against")
    kernel_table(args.repeat)
    solver_table(args.dense_max, args.repeat)


if __name__ == "__main__":
    main()
