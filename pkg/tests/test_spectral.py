import mpmath
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.fft import idct

from emocascade.audio import AudioSignal, frame_signal, next_pow2, power_spectra
from emocascade.errors import NegativeFrequency, SignalTooShort, SilentSignal
from emocascade.spectral import mel_filterbank, mel_scale, mfcc, vocal_tract_bandwidth
from emocascade.synth import synth_vowel, tone, white_noise

FS = 16000
BIN_HZ = FS / 512


def test_mel_fixed_points():
    assert mel_scale(0.0) == 0.0
    oracle_1000 = float(2595 * mpmath.log10(1 + mpmath.mpf(1000) / 700))
    assert mel_scale(1000.0) == pytest.approx(oracle_1000, abs=1e-9)
    assert mel_scale(1000.0) == pytest.approx(999.99, abs=0.01)
    assert mel_scale(700.0) == pytest.approx(781.17, abs=0.01)


def test_mel_negative():
    with pytest.raises(NegativeFrequency):
        mel_scale(-1.0)


def test_mel_strictly_increasing():
    mels = mel_scale(np.arange(0, 8001, 1.0))
    assert np.all(np.diff(mels) > 0)


def test_filterbank_shape_and_peaks():
    bank = mel_filterbank(26, 512, FS)
    assert bank.shape == (26, 257)
    assert np.all(bank >= 0)
    np.testing.assert_allclose(bank.max(axis=1), 1.0)


def test_filterbank_coverage():
    bank = mel_filterbank(26, 512, FS)
    freqs = np.arange(257) * BIN_HZ
    inside = (freqs > 0) & (freqs < FS / 2)
    assert np.all(bank[:, inside].sum(axis=0) > 0)


def test_silence_gives_identical_frames():
    m = mfcc(AudioSignal(np.zeros(8000), FS))
    assert np.all(m.coefficients == m.coefficients[0])
    assert m.mean_mfcc == pytest.approx(mfcc(AudioSignal(np.zeros(12000), FS)).mean_mfcc, abs=1e-12)


def test_too_short():
    with pytest.raises(SignalTooShort):
        mfcc(AudioSignal(np.ones(100), FS))


def test_mean_mfcc_is_recomputable():
    m = mfcc(synth_vowel(duration_s=0.5))
    assert m.coefficients.shape[1] == 13
    assert m.mean_mfcc == pytest.approx(m.coefficients[:, 1:].sum() / (m.coefficients.shape[0] * 12))


def test_dct_inverts_to_log_energies():
    sig = synth_vowel(duration_s=0.3)
    m = mfcc(sig, n_filters=26, n_coeffs=26)
    frames = frame_signal(sig, 30, 15, "hamming")
    power, _ = power_spectra(frames, next_pow2(frames.frame_length))
    log_e = np.log(np.maximum(power @ mel_filterbank(26, 512, FS).T, 1e-10))
    np.testing.assert_allclose(idct(m.coefficients, type=2, norm="ortho", axis=1), log_e, atol=1e-9)


@settings(max_examples=20, deadline=None)
@given(st.floats(0.01, 100.0))
def test_mfcc_mean_amplitude_invariant(scale):
    # holds while every filter energy stays above the 1e-10 log floor
    sig = synth_vowel(duration_s=0.3, peak=0.5)
    assert mfcc(sig.scaled(scale)).mean_mfcc == pytest.approx(mfcc(sig).mean_mfcc, abs=1e-6)


def test_tone_bandwidth_narrow():
    assert vocal_tract_bandwidth(tone(1000)).bw_hz <= 2 * BIN_HZ


def test_two_tone_bandwidth():
    sig = AudioSignal(tone(300).samples + tone(3400).samples, FS)
    bw = vocal_tract_bandwidth(sig, -20)
    assert bw.bw_hz == pytest.approx(3100, abs=BIN_HZ)
    assert 0 <= bw.f_min_hz <= bw.f_max_hz <= FS / 2


def test_bandwidth_monotone_in_threshold():
    sig = synth_vowel(duration_s=0.5)
    widths = [vocal_tract_bandwidth(sig, db).bw_hz for db in (-3, -10, -20, -30, -40, -60)]
    assert all(b >= a for a, b in zip(widths, widths[1:]))


@settings(max_examples=20, deadline=None)
@given(st.floats(0.01, 100.0), st.integers(0, 50))
def test_bandwidth_amplitude_invariant(scale, seed):
    sig = white_noise(0.2, seed=seed)
    assert vocal_tract_bandwidth(sig.scaled(scale)).bw_hz == vocal_tract_bandwidth(sig).bw_hz


def test_silent_signal():
    with pytest.raises(SilentSignal):
        vocal_tract_bandwidth(AudioSignal(np.zeros(4000), FS))


def test_threshold_must_be_negative():
    with pytest.raises(ValueError):
        vocal_tract_bandwidth(tone(1000), 0.0)


def test_log_floor_breaks_invariance_only_for_near_silence():
    sig = synth_vowel(duration_s=0.3)
    assert mfcc(sig.scaled(1e-3)).mean_mfcc != pytest.approx(mfcc(sig).mean_mfcc, abs=1e-6)
