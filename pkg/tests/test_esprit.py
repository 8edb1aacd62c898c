import numpy as np
import pytest

from espritkit import esprit
from espritkit import signal_model as sm
from espritkit.errors import InvalidRank, RankDeficient, RankDeficientUpBlock, SolverFailure

from conftest import random_measure

SOLVERS = ["dense", "fast"]


def _score(m, res):
    md_z, perm = sm.matching_distance(m.z_dom, res.z_hat)
    md_mu = np.max(np.abs(m.mu_dom - res.mu_hat[np.asarray(perm)]))
    return md_z, md_mu


def test_toeplitz_from_signal_examples():
    np.testing.assert_array_equal(esprit.toeplitz_from_signal([1]).dense(), [[1]])
    np.testing.assert_array_equal(esprit.toeplitz_from_signal([1, 1j]).dense(), [[1, -1j], [1j, 1]])
    g = sm.synthesize(sm.new_measure([0.0], [1.0], 1), 3)
    t = esprit.toeplitz_from_signal(g).dense()
    np.testing.assert_allclose(t, np.ones((3, 3)))
    assert np.linalg.matrix_rank(t) == 1


def test_toeplitz_discards_imag_g0():
    t = esprit.toeplitz_from_signal([1 + 0.3j, 0.5])
    assert t.first_col[0] == 1.0
    assert t.discarded_imag == pytest.approx(0.3)


@pytest.mark.parametrize("z, n, want", [
    ([1], 3, [[1], [1], [1]]),
    ([1, -1], 2, [[1, 1], [1, -1]]),
    ([1j], 4, [[1], [1j], [-1], [-1j]]),
])
def test_vandermonde(z, n, want):
    np.testing.assert_allclose(esprit.vandermonde(z, n), want, atol=1e-15)


@pytest.mark.parametrize("solver", SOLVERS)
def test_two_sources_exact(backend, solver):
    m = sm.new_measure([0.1, 0.3], [0.6, 0.4], 2)
    res = esprit.run(sm.synthesize(m, 16), 2, solver=solver)
    md_z, md_mu = _score(m, res)
    assert md_z <= 1e-8 and md_mu <= 1e-8
    np.testing.assert_allclose(np.abs(res.z_hat), 1.0, rtol=0, atol=1e-15)
    assert res.solver_used.value == solver


@pytest.mark.parametrize("solver", SOLVERS)
def test_single_source(solver):
    m = sm.new_measure([0.25], [1.0], 1)
    res = esprit.run(sm.synthesize(m, 8), 1, solver=solver)
    assert abs(res.z_hat[0] - 1j) <= 1e-10
    assert res.mu_hat[0] == pytest.approx(1.0, abs=1e-10)
    assert res.locations[0] == pytest.approx(0.25, abs=1e-10)


def test_zero_signal():
    with pytest.raises((RankDeficientUpBlock, SolverFailure)):
        esprit.run(np.zeros(16), 1)


@pytest.mark.parametrize("r", [0, 8, 9])
def test_invalid_rank(r):
    with pytest.raises(InvalidRank):
        esprit.run(np.ones(8), r)


def test_exact_recovery_random(rng):
    for trial in range(30):
        r = 1 + trial % 5
        m = random_measure(rng, r)
        res = esprit.run(sm.synthesize(m, 64), r)
        md_z, md_mu = _score(m, res)
        assert md_z <= 1e-8 and md_mu <= 1e-8


def test_sorted_by_argument(rng):
    m = random_measure(rng, 5)
    res = esprit.run(sm.synthesize(m, 64), 5)
    assert np.all(np.diff(res.args) >= 0)
    assert np.all((res.args >= 0) & (res.args < 2 * np.pi))


def test_rotation_equivariance(rng):
    for _ in range(10):
        m = random_measure(rng, 3)
        c = rng.random()
        shifted = sm.new_measure(np.mod(m.locations + c, 1.0), m.intensities, 3)
        a = esprit.run(sm.synthesize(m, 64), 3)
        b = esprit.run(sm.synthesize(shifted, 64), 3)
        md, _ = sm.matching_distance(a.z_hat * np.exp(2j * np.pi * c), b.z_hat)
        assert md <= 1e-8


@pytest.mark.parametrize("alpha", [0.0, 0.1])
def test_solver_agreement(rng, alpha):
    for n in (64, 256, 512):
        m = random_measure(rng, 3)
        g = sm.observe(m, n, sm.NoiseSpec(alpha, sm.NoiseKind.COMPLEX_GAUSSIAN, n))
        a = esprit.run(g, 3, solver="dense")
        b = esprit.run(g, 3, solver="fast", seed=1)
        assert sm.matching_distance(a.z_hat, b.z_hat)[0] <= 1e-6


def test_diagnostics_noise():
    m = sm.new_measure([0.2, 0.5], [0.6, 0.4], 2)
    g = sm.synthesize(m, 64).samples.copy()
    g[0] += 0.01j
    res = esprit.run(g, 2)
    d = res.diagnostics
    assert d["discarded_imag_g0"] == pytest.approx(0.01)
    assert d["degenerate"] is False
    assert len(d["eigenvalues"]) == 2 and d["up_block_cond"] >= 1.0
    np.testing.assert_allclose(d["lambda_modulus"], 1.0, atol=1e-10)


def test_negative_intensity_clamped():
    # fitting an extra spurious node gives a slightly negative weight somewhere
    z = np.exp(2j * np.pi * np.array([0.1, 0.6]))
    g = 0.9 * z[0] ** np.arange(32) - 0.1 * z[1] ** np.arange(32)
    fit = esprit.intensity_fit(z, g)
    assert fit.mu[1] == 0.0
    assert fit.clamped == pytest.approx(0.1)
    assert fit.mu_complex[1].real == pytest.approx(-0.1)


@pytest.mark.parametrize("z, g, want", [
    ([1], [2, 2, 2, 2], [2]),
    ([1, -1], [1, 0, 1, 0], [0.5, 0.5]),
])
def test_estimate_intensities_examples(z, g, want):
    np.testing.assert_allclose(esprit.estimate_intensities(z, g), want, atol=1e-14)


def test_estimate_intensities_exact(rng):
    m = random_measure(rng, 4)
    mu = esprit.estimate_intensities(m.z, sm.synthesize(m, 40))
    np.testing.assert_allclose(mu, m.intensities, atol=1e-10)


def test_estimate_intensities_coincident():
    with pytest.raises(RankDeficient):
        esprit.estimate_intensities([1, 1], np.ones(8))


def test_sort_ties_by_modulus():
    lam = np.array([2.0, 0.5, 1j, 1.0])
    out = esprit._sort_by_arg(lam)
    np.testing.assert_array_equal(out, [0.5, 1.0, 2.0, 1j])
