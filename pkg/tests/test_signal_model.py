import json
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from espritkit import signal_model as sm
from espritkit.errors import (
    ConfigInvalid,
    InvalidRank,
    LengthMismatch,
    NonPositiveIntensity,
    OutOfRangeLocation,
    SignalFormatError,
    TooLarge,
    ZeroSeparation,
)


# --- new_measure -------------------------------------------------------------

def test_new_measure_rescales():
    m = sm.new_measure([0.1], [2.0], 1)
    np.testing.assert_array_equal(m.intensities, [1.0])


def test_new_measure_coincident_dominant():
    with pytest.raises(ZeroSeparation):
        sm.new_measure([0.1, 0.1], [0.5, 0.5], 2)


def test_new_measure_tail_on_dominant():
    with pytest.raises(ZeroSeparation):
        sm.new_measure([0.1, 0.1], [0.7, 0.3], 1)


def test_new_measure_sorts_by_intensity():
    m = sm.new_measure([0.3, 0.1], [0.4, 0.6], 2)
    np.testing.assert_allclose(m.locations, [0.1, 0.3])
    np.testing.assert_allclose(m.intensities, [0.6, 0.4])


@pytest.mark.parametrize("f, mu, r, exc", [
    ([0.1, 0.2], [1.0], 1, LengthMismatch),
    ([1.0], [1.0], 1, OutOfRangeLocation),
    ([-0.1], [1.0], 1, OutOfRangeLocation),
    ([0.1, 0.2], [1.0, 0.0], 1, NonPositiveIntensity),
    ([0.1, 0.2], [1.0, 1.0], 3, InvalidRank),
    ([0.1, 0.2], [1.0, 1.0], 0, InvalidRank),
])
def test_new_measure_errors(f, mu, r, exc):
    with pytest.raises(exc):
        sm.new_measure(f, mu, r)


def test_measure_is_immutable():
    m = sm.new_measure([0.1, 0.4], [0.5, 0.5], 1)
    with pytest.raises(ValueError):
        m.locations[0] = 0.2


# --- separation / tail -------------------------------------------------------

@pytest.mark.parametrize("f, r, want", [
    ([0.0, 0.5], 2, 2.0),
    ([0.0, 0.25, 0.5], 1, math.sqrt(2)),
    ([0.1, 0.1 + 1e-3], 2, 2 * math.sin(math.pi * 1e-3)),
])
def test_separation_examples(f, r, want):
    m = sm.new_measure(f, [1.0] * len(f), r)
    assert sm.separation(m) == pytest.approx(want, rel=1e-12)


def test_separation_single_source_is_infinite():
    assert sm.separation(sm.new_measure([0.3], [1.0], 1)) == math.inf


@pytest.mark.parametrize("mu, r, tail, flag", [
    ([1.0], 1, 0.0, True),
    ([0.6, 0.3, 0.1], 2, 0.1, False),
    ([0.5, 0.3, 0.15, 0.05], 2, 0.2, False),
    ([0.5, 0.46, 0.04], 2, 0.04, True),
])
def test_tail_mass(mu, r, tail, flag):
    f = np.linspace(0, 0.8, len(mu))
    m = sm.new_measure(f, mu, r)
    assert sm.tail_mass(m) == pytest.approx(tail, abs=1e-15)
    assert sm.tail_condition_holds(m) is flag


@given(st.lists(st.floats(0.0, 0.999), min_size=2, max_size=6, unique=True), st.floats(0.0, 1.0))
def test_separation_rotation_invariant(f, c):
    r = 1
    m = sm.new_measure(f, [1.0] * len(f), r)
    assert np.isfinite(sm.separation(m))
    shifted = np.mod(np.asarray(f) + c, 1.0)
    shifted[shifted >= 1.0] = 0.0
    try:
        m2 = sm.new_measure(shifted, [1.0] * len(f), r)
    except ZeroSeparation:
        return
    assert sm.separation(m2) == pytest.approx(sm.separation(m), abs=1e-9)


# --- synthesize --------------------------------------------------------------

@pytest.mark.parametrize("f, mu, n, want", [
    ([0.0], [1.0], 3, [1, 1, 1]),
    ([0.5], [1.0], 4, [1, -1, 1, -1]),
    ([0.25, 0.75], [0.5, 0.5], 4, [1, 0, -1, 0]),
])
def test_synthesize_examples(f, mu, n, want):
    g = sm.synthesize(sm.new_measure(f, mu, len(f)), n)
    np.testing.assert_allclose(g.samples, want, atol=1e-14)


def test_single_source_unit_modulus():
    g = sm.synthesize(sm.new_measure([0.123456], [3.0], 1), 4096)
    np.testing.assert_allclose(np.abs(g.samples), 1.0, atol=1e-13)
    assert g.samples[0] == 1.0


def test_series_requires_samples():
    with pytest.raises(ValueError):
        sm.MeasurementSeries([])


# --- noise -------------------------------------------------------------------

def test_noise_none_is_zero():
    e = sm.sample_noise(16, sm.NoiseSpec(1.0, sm.NoiseKind.NONE, 3))
    assert not np.any(e)


@pytest.mark.parametrize("kind", [sm.NoiseKind.COMPLEX_GAUSSIAN, sm.NoiseKind.REAL_GAUSSIAN])
def test_noise_deterministic_and_e0_real(kind):
    spec = sm.NoiseSpec(0.7, kind, 12345)
    a, b = sm.sample_noise(64, spec), sm.sample_noise(64, spec)
    np.testing.assert_array_equal(a, b)
    assert a[0].imag == 0.0
    assert not np.array_equal(a, sm.sample_noise(64, sm.NoiseSpec(0.7, kind, 12346)))


def test_noise_law_of_large_numbers():
    e = sm.sample_noise(10**6, sm.NoiseSpec(1.0, sm.NoiseKind.COMPLEX_GAUSSIAN, 99))
    assert abs(e.mean()) <= 0.01
    assert 0.99 <= np.mean(np.abs(e) ** 2) <= 1.01


@pytest.mark.parametrize("kind", [sm.NoiseKind.COMPLEX_GAUSSIAN, sm.NoiseKind.REAL_GAUSSIAN])
def test_noise_tail_condition(kind):
    alpha = 0.8
    e = sm.sample_noise(10**5, sm.NoiseSpec(alpha, kind, 5))
    for t in (alpha, 2 * alpha, 3 * alpha):
        freq = np.mean(np.abs(e) >= t)
        assert freq <= 2 * math.exp(-t**2 / (2 * alpha**2)) * 1.5


def test_noise_spec_validation():
    with pytest.raises(ValueError):
        sm.NoiseSpec(-1.0, sm.NoiseKind.COMPLEX_GAUSSIAN, 0)


# --- matching distance -------------------------------------------------------

def test_md_swap():
    d, perm = sm.matching_distance([1, 2], [2, 1])
    assert d == 0
    assert list(perm) == [1, 0]


def test_md_identity_pairing():
    d, perm = sm.matching_distance([0, 1], [0.1, 1.2])
    assert d == pytest.approx(0.2)
    assert list(perm) == [0, 1]


def test_md_roots():
    z = [1, 1j, -1]
    d, perm = sm.matching_distance(z, z)
    assert d == 0 and list(perm) == [0, 1, 2]


def test_md_length_mismatch():
    with pytest.raises(LengthMismatch):
        sm.matching_distance([1, 2], [1])


def test_md_too_large():
    z = np.exp(2j * np.pi * np.arange(9) / 9)
    with pytest.raises(TooLarge):
        sm.matching_distance(z, z)


def test_md_threshold_path_matches_exhaustive(rng):
    for r in (3, 6, 8):
        a = np.exp(2j * np.pi * rng.random(r))
        b = a[rng.permutation(r)] + 0.01 * (rng.standard_normal(r) + 1j * rng.standard_normal(r))
        d_ex, _ = sm.matching_distance(a, b)
        d_th, perm = sm._threshold_matching(np.abs(a[:, None] - b[None, :]))
        assert d_th == pytest.approx(d_ex, abs=0)
        assert sorted(perm) == list(range(r))


def test_md_threshold_large_r(rng):
    r = 20
    a = np.exp(2j * np.pi * np.arange(r) / r)
    p = rng.permutation(r)
    d, perm = sm.matching_distance(a, a[p], allow_threshold=True)
    assert d == 0
    np.testing.assert_array_equal(a[p][perm], a)


points = st.lists(st.complex_numbers(max_magnitude=10, allow_nan=False, allow_infinity=False), min_size=1, max_size=6)


@settings(max_examples=60)
@given(points, st.data())
def test_md_properties(a, data):
    r = len(a)
    b = data.draw(st.lists(st.complex_numbers(max_magnitude=10, allow_nan=False, allow_infinity=False), min_size=r, max_size=r))
    a, b = np.array(a), np.array(b)
    assert sm.matching_distance(a, a)[0] == 0
    d_ab, perm = sm.matching_distance(a, b)
    d_ba, _ = sm.matching_distance(b, a)
    assert d_ab == pytest.approx(d_ba, rel=1e-12, abs=0)
    assert np.max(np.abs(a - b[np.asarray(perm)])) == d_ab
    q = np.random.default_rng(r).permutation(r)
    assert sm.matching_distance(a[q], b[q])[0] == pytest.approx(d_ab, rel=1e-12, abs=0)


# --- file formats ------------------------------------------------------------

def test_signal_roundtrip(tmp_path, rng):
    g = sm.MeasurementSeries(rng.standard_normal(33) + 1j * rng.standard_normal(33))
    p = tmp_path / "s.txt"
    sm.write_signal(p, g)
    lines = p.read_text().splitlines()
    assert lines[0] == "33" and len(lines) == 34
    np.testing.assert_array_equal(sm.read_signal(p).samples, g.samples)


@pytest.mark.parametrize("text", ["", "x\n1,2\n", "2\n1,2\n", "1\n1;2\n", "1\nfoo,2\n", "1\nnan,0\n", "0\n"])
def test_signal_malformed(tmp_path, text):
    p = tmp_path / "bad.txt"
    p.write_text(text)
    with pytest.raises(SignalFormatError):
        sm.read_signal(p)


def test_config_parse():
    cfg = sm.parse_measure_config({"locations": [0.3, 0.1], "intensities": [1, 3], "r": 2,
                                   "alpha": 0.5, "noise_kind": "real_gaussian", "seed": 9, "n": 32})
    np.testing.assert_allclose(cfg.measure.locations, [0.1, 0.3])
    assert cfg.noise == sm.NoiseSpec(0.5, sm.NoiseKind.REAL_GAUSSIAN, 9)
    assert cfg.n == 32


@pytest.mark.parametrize("patch, field", [
    ({"r": 5}, "r"),
    ({"alpha": -1}, "alpha"),
    ({"noise_kind": "pink"}, "noise_kind"),
    ({"seed": -3}, "seed"),
    ({"n": 0}, "n"),
    ({"locations": None}, "locations"),
])
def test_config_errors_name_field(patch, field):
    raw = {"locations": [0.1, 0.5], "intensities": [0.5, 0.5], "r": 2, "alpha": 0.1, "seed": 1}
    raw.update(patch)
    if raw["locations"] is None:
        del raw["locations"]
    with pytest.raises(ConfigInvalid, match=field):
        sm.parse_measure_config(raw)


def test_config_load_bad_json(tmp_path):
    p = tmp_path / "c.json"
    p.write_text("{not json")
    with pytest.raises(ConfigInvalid):
        sm.load_measure_config(p)
    p.write_text(json.dumps({"locations": [0.1], "intensities": [1.0], "r": 1}))
    assert sm.load_measure_config(p).noise.kind is sm.NoiseKind.NONE
