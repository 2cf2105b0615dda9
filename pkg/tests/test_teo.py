import itertools

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from emocascade.audio import AudioSignal
from emocascade.errors import AllSilentFrames, BandCountTooLarge, SequenceTooShort
from emocascade.synth import synth_vowel, tone, white_noise
from emocascade.teo import (TeoProfile, critical_band_edges, critical_band_filter, envelope_area,
                            envelope_area_feature, normalized_autocorrelation, teager_energy, teo_cb_auto_env)

FS = 16000
AMPS = (0.5, 1.0, 2.0)
OMEGAS = (0.1, 0.5, 1.0)


@given(st.floats(-1e3, 1e3), st.integers(3, 200))
def test_constant_sequence_has_zero_energy(c, n):
    assert np.all(teager_energy(np.full(n, c)) == 0)


def test_output_length_and_short_input():
    assert teager_energy(np.arange(10.0)).shape == (8,)
    with pytest.raises(SequenceTooShort):
        teager_energy([1.0, 2.0])


def test_quarter_rate_cosine():
    n = np.arange(64)
    np.testing.assert_allclose(teager_energy(np.cos(np.pi * n / 2)), 1.0, atol=1e-12)


@pytest.mark.parametrize("amp,omega", list(itertools.product(AMPS, OMEGAS)))
def test_sinusoid_closed_form(amp, omega):
    n = np.arange(2000)
    y = teager_energy(amp * np.cos(omega * n))
    assert np.max(np.abs(y - amp ** 2 * np.sin(omega) ** 2)) < 1e-9


def test_doubling_amplitude_quadruples():
    n = np.arange(500)
    x = 0.3 * np.cos(0.7 * n)
    np.testing.assert_allclose(teager_energy(2 * x), 4 * teager_energy(x), rtol=1e-12)


def test_band_edges_contiguous_and_increasing():
    edges = critical_band_edges(16, FS)
    assert edges[0][0] == 100.0 and edges[-1][1] == 7900.0
    for (lo, hi), (nxt, _) in zip(edges, edges[1:]):
        assert lo < hi == nxt


def test_band_edges_capped_by_nyquist():
    assert critical_band_edges(8, 8000)[-1][1] == 3900.0


def test_single_band_passes_in_band_tone():
    sig = tone(1000, 0.5)
    (band,), edges = critical_band_filter(sig, 1)
    assert edges == [(100.0, 7900.0)]
    mid = slice(1000, -1000)
    np.testing.assert_allclose(band[mid], sig.samples[mid], atol=0.01)


def test_tone_energy_stays_in_its_band():
    bands, edges = critical_band_filter(tone(1000), 16)
    energy = np.array([np.sum(b ** 2) for b in bands])
    home = next(i for i, (lo, hi) in enumerate(edges) if lo <= 1000 < hi)
    assert energy[home] / energy.sum() >= 0.9


def test_too_many_bands():
    with pytest.raises(BandCountTooLarge):
        critical_band_filter(tone(1000), 200)


def test_normalized_autocorrelation_bound():
    rng = np.random.default_rng(99)
    frames = rng.standard_normal((1000, 400)) * rng.uniform(1e-3, 1e3, (1000, 1))
    norm, _ = normalized_autocorrelation(frames, 200)
    assert np.all(np.abs(norm) <= 1 + 1e-12)


@settings(max_examples=50, deadline=None)
@given(arrays(float, st.integers(4, 120), elements=st.floats(-10, 10)))
def test_normalized_autocorrelation_bound_property(frame):
    norm, r0 = normalized_autocorrelation(frame, frame.shape[0] // 2)
    assert np.all(np.abs(norm) <= 1 + 1e-12)
    if r0[0] > 0:
        assert norm[0, 0] == pytest.approx(1.0)


@pytest.mark.parametrize("seed", range(10))
def test_tone_area_exceeds_noise_area(seed):
    rng = np.random.default_rng(seed)
    n = np.arange(400)
    tone_frame = np.cos(2 * np.pi * rng.uniform(200, 3000) * n / FS + rng.uniform(0, 2 * np.pi))
    noise_frame = rng.standard_normal(400)
    norm, _ = normalized_autocorrelation(np.vstack([tone_frame, noise_frame]), 200)
    tone_area, noise_area = envelope_area(norm[0]), envelope_area(norm[1])
    assert tone_area > noise_area
    # biased estimator: a periodic envelope decays linearly to 1/2 at the last lag
    assert tone_area >= 0.7 * 200
    assert noise_area < 0.2 * 200


def test_area_bounds():
    profile = TeoProfile([teager_energy(white_noise(0.3, seed=4).samples)], [(100.0, 7900.0)], FS)
    feat = envelope_area_feature(profile)
    areas = feat.areas[~np.isnan(feat.areas)]
    assert np.all((areas >= 0) & (areas <= feat.n_lags))
    assert 0 <= feat.z1 <= 1000


@pytest.mark.parametrize("scale", [2.0, 0.1, 37.0])
def test_z1_amplitude_invariant(scale):
    sig = synth_vowel(duration_s=0.5)
    assert teo_cb_auto_env(sig.scaled(scale)).z1 == pytest.approx(teo_cb_auto_env(sig).z1, rel=1e-6)


def test_all_silent():
    with pytest.raises(AllSilentFrames):
        teo_cb_auto_env(AudioSignal(np.zeros(4000), FS))


def test_periodic_source_scores_above_noise_source():
    assert teo_cb_auto_env(synth_vowel(duration_s=0.5)).z1 > teo_cb_auto_env(white_noise(0.5)).z1
