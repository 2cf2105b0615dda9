"""Synthetic test signals: all-pole vowels, tones, noise, and planted-feature utterances."""
from __future__ import annotations

import math

import numpy as np
from scipy.signal import butter, lfilter, sosfilt

from .audio import AudioSignal


def resonator_poly(formants_hz, radius: float, sample_rate_hz: float) -> np.ndarray:
    """Denominator of an all-pole filter with one conjugate pole pair per formant."""
    poly = np.array([1.0])
    for f in formants_hz:
        theta = 2 * math.pi * f / sample_rate_hz
        poly = np.convolve(poly, [1.0, -2 * radius * math.cos(theta), radius * radius])
    return poly


def pulse_train(n_samples: int, f0_hz: float, sample_rate_hz: float) -> np.ndarray:
    x = np.zeros(n_samples)
    period = sample_rate_hz / f0_hz
    x[np.round(np.arange(0, n_samples, period)).astype(int).clip(max=n_samples - 1)] = 1.0
    return x


def synth_vowel(formants_hz=(500, 1500, 2500), radius: float = 0.97, f0_hz: float = 100.0,
                duration_s: float = 2.0, sample_rate_hz: int = 16000, peak: float = 0.5) -> AudioSignal:
    n = int(round(duration_s * sample_rate_hz))
    y = lfilter([1.0], resonator_poly(formants_hz, radius, sample_rate_hz), pulse_train(n, f0_hz, sample_rate_hz))
    return AudioSignal(peak * y / np.max(np.abs(y)), sample_rate_hz)


def tone(freq_hz: float, duration_s: float = 1.0, sample_rate_hz: int = 16000, amplitude: float = 0.5) -> AudioSignal:
    n = np.arange(int(round(duration_s * sample_rate_hz)))
    return AudioSignal(amplitude * np.cos(2 * math.pi * freq_hz * n / sample_rate_hz), sample_rate_hz)


def white_noise(duration_s: float = 1.0, sample_rate_hz: int = 16000, seed: int = 0,
                amplitude: float = 0.1) -> AudioSignal:
    rng = np.random.default_rng(seed)
    return AudioSignal(amplitude * rng.standard_normal(int(round(duration_s * sample_rate_hz))), sample_rate_hz)


def bandpass_noise(low_hz: float, high_hz: float, duration_s: float = 1.0, sample_rate_hz: int = 16000,
                   seed: int = 0, amplitude: float = 0.1) -> AudioSignal:
    sos = butter(6, [low_hz, high_hz], btype="bandpass", fs=sample_rate_hz, output="sos")
    y = sosfilt(sos, white_noise(duration_s, sample_rate_hz, seed, 1.0).samples)
    return AudioSignal(amplitude * y / np.max(np.abs(y)), sample_rate_hz)


# Planted-feature recipes for the end-to-end corpus. Pulse excitation keeps the
# Teager profile periodic (high z1); noise excitation lowers it. Within each
# branch a single knob moves the feature its stage reads.
RECIPES = {
    "anger": dict(formants=(700, 1200, 2500), excitation="pulse", speech_s=0.8),
    "disgust": dict(formants=(400, 1200, 2500), excitation="pulse", speech_s=0.8),
    "happy": dict(formants=(300, 2200, 3000), excitation="noise", speech_s=0.8),
    "sad": dict(formants=(550, 1200, 2500), excitation="noise", speech_s=1.4),
    "boredom": dict(formants=(400, 1200, 2500), excitation="noise", speech_s=0.7),
    "neutral": dict(formants=(700, 1200, 2500), excitation="noise", speech_s=0.7),
}


def planted_utterance(emotion: str, take: int = 0, total_s: float = 1.6, sample_rate_hz: int = 16000) -> AudioSignal:
    """Deterministic utterance whose features fall on ``emotion``'s side of every cascade stage."""
    recipe = RECIPES[emotion]
    rng = np.random.default_rng(1000 * take + sorted(RECIPES).index(emotion))
    n = int(round(recipe["speech_s"] * sample_rate_hz))
    if recipe["excitation"] == "pulse":
        source = pulse_train(n, 110.0 + 20.0 * take, sample_rate_hz)
    else:
        source = rng.standard_normal(n)
    voiced = lfilter([1.0], resonator_poly(recipe["formants"], 0.97, sample_rate_hz), source)
    out = np.zeros(int(round(total_s * sample_rate_hz)))
    start = (out.shape[0] - n) // 2
    out[start : start + n] = 0.5 * voiced / np.max(np.abs(voiced))
    out += 1e-4 * rng.standard_normal(out.shape[0])
    return AudioSignal(out, sample_rate_hz)


def write_planted_corpus(out_dir, takes: int = 2) -> list:
    """One EMO-DB-named WAV per (emotion, take); speakers 03, 08, 09, ... by take."""
    from pathlib import Path

    from .audio import write_wav
    from .corpus import emodb_name

    speakers = ("03", "08", "09", "10", "11", "12")
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    paths = []
    for emotion in RECIPES:
        for take in range(takes):
            path = out_dir / emodb_name(speakers[take % len(speakers)], "a01", emotion)
            write_wav(path, planted_utterance(emotion, take))
            paths.append(path)
    return paths
