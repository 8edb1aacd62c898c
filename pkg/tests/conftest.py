import numpy as np
import pytest

from espritkit import kernels

BACKENDS = ["numpy"] + (["numba"] if kernels.HAVE_NUMBA else [])


@pytest.fixture(params=BACKENDS)
def backend(request, monkeypatch):
    """Run the test once per kernel backend."""
    monkeypatch.setattr(kernels, "USE_NUMBA", request.param == "numba")
    return request.param


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


def crandn(rng, *shape):
    return (rng.standard_normal(shape) + 1j * rng.standard_normal(shape)) / np.sqrt(2)


def random_measure(rng, r, min_sep=0.1, min_mu=0.05):
    """Seeded measure with d = r, chordal separation >= min_sep, intensities >= min_mu."""
    from espritkit.signal_model import new_measure, separation

    while True:
        f = rng.random(r)
        mu = rng.uniform(min_mu, 1.0, r)
        mu = np.maximum(mu / mu.sum(), min_mu)
        m = new_measure(f, mu, r)
        if separation(m) >= min_sep and m.intensities.min() >= min_mu * 0.999:
            return m
