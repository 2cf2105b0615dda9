"""Teager-energy critical-band autocorrelation-envelope feature (TEO-CB-Auto-Env).

Pipeline: Bark-spaced band-pass bank -> Teager energy per band -> 25 ms frames
-> autocorrelation normalised by its zero lag -> piecewise-linear envelope over
local maxima -> trapezoid area. The utterance scalar ``z1`` is the mean area,
normalised by the lag count and multiplied by ``scale``.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.signal import butter, sosfiltfilt

from .audio import AudioSignal, frame_samples, ms_to_samples, next_pow2
from .errors import AllSilentFrames, BandCountTooLarge, SequenceTooShort

LOW_EDGE_HZ = 100.0
HIGH_EDGE_HZ = 8000.0


@dataclass(frozen=True)
class TeoProfile:
    bands: list  # one Teager sequence per band
    band_edges_hz: list  # (low, high) per band
    sample_rate_hz: int


@dataclass(frozen=True)
class TeoEnvelopeFeature:
    areas: np.ndarray  # (n_bands, n_frames) in lag units; NaN where the frame was gated out
    n_lags: int
    z1: float


def teager_energy(x) -> np.ndarray:
    """x(n)^2 - x(n+1) x(n-1) over interior samples (two shorter than the input)."""
    x = np.asarray(x, dtype=float)
    if x.shape[0] < 3:
        raise SequenceTooShort("Teager operator needs at least 3 samples")
    return x[1:-1] ** 2 - x[2:] * x[:-2]


def hz_to_bark(f):
    # Traunmueller (1990)
    f = np.asarray(f, dtype=float)
    return 26.81 * f / (1960.0 + f) - 0.53


def bark_to_hz(z):
    z = np.asarray(z, dtype=float)
    return 1960.0 * (z + 0.53) / (26.28 - z)


def critical_band_edges(n_bands: int, sample_rate_hz: float) -> list[tuple[float, float]]:
    if n_bands < 1:
        raise ValueError("n_bands must be at least 1")
    hi = min(HIGH_EDGE_HZ, sample_rate_hz / 2 - LOW_EDGE_HZ)
    if hi <= LOW_EDGE_HZ:
        raise BandCountTooLarge(f"sample rate {sample_rate_hz} Hz leaves no usable band")
    edges = bark_to_hz(np.linspace(hz_to_bark(LOW_EDGE_HZ), hz_to_bark(hi), n_bands + 1))
    edges[0], edges[-1] = LOW_EDGE_HZ, hi
    return [(float(a), float(b)) for a, b in zip(edges[:-1], edges[1:])]


def critical_band_filter(signal: AudioSignal, n_bands: int = 16, order: int = 4,
                         frame_ms: float = 25.0) -> tuple[list[np.ndarray], list[tuple[float, float]]]:
    """Zero-phase Butterworth band-pass bank on the Bark scale.

    Raises BandCountTooLarge when the narrowest band spans fewer than two
    FFT bins of a ``frame_ms`` analysis frame.
    """
    fs = signal.sample_rate_hz
    edges = critical_band_edges(n_bands, fs)
    bin_hz = fs / next_pow2(ms_to_samples(frame_ms, fs))
    narrowest = min(b - a for a, b in edges)
    if narrowest < 2 * bin_hz:
        raise BandCountTooLarge(f"{n_bands} bands: narrowest is {narrowest:.1f} Hz, below 2 bins ({2 * bin_hz:.1f} Hz)")
    x = signal.samples
    out = []
    for lo, hi in edges:
        sos = butter(order, [lo, hi], btype="bandpass", fs=fs, output="sos")
        padlen = min(3 * (2 * len(sos) + 1), x.shape[0] - 1)
        out.append(sosfiltfilt(sos, x, padlen=padlen))
    return out, edges


def teo_profile(signal: AudioSignal, n_bands: int = 16, frame_ms: float = 25.0) -> TeoProfile:
    bands, edges = critical_band_filter(signal, n_bands, frame_ms=frame_ms)
    return TeoProfile([teager_energy(b) for b in bands], edges, signal.sample_rate_hz)


def normalized_autocorrelation(frames: np.ndarray, n_lags: int) -> tuple[np.ndarray, np.ndarray]:
    """Row-wise biased autocorrelation R(0..n_lags); returns (R / R(0), R(0)).

    Rows with R(0) == 0 come back as zeros.
    """
    frames = np.atleast_2d(np.asarray(frames, dtype=float))
    size = next_pow2(2 * frames.shape[1])
    spec = np.fft.rfft(frames, size, axis=1)
    r = np.fft.irfft(spec.real ** 2 + spec.imag ** 2, size, axis=1)[:, : n_lags + 1]
    r0 = r[:, 0].copy()
    # FFT round-off can leave R(0) a hair below the true energy
    r0 = np.maximum(r0, np.sum(frames ** 2, axis=1))
    norm = np.zeros_like(r)
    live = r0 > 0
    norm[live] = r[live] / r0[live, None]
    return norm, r0


def envelope_area(norm_acf: np.ndarray) -> float:
    """Trapezoid area (lag units) under the line through the local maxima of |R(j)|/R(0)."""
    a = np.abs(norm_acf)
    n = a.shape[0]
    if n == 1:
        return 0.0
    interior = np.flatnonzero((a[1:-1] >= a[:-2]) & (a[1:-1] >= a[2:])) + 1
    peaks = np.concatenate(([0], interior, [n - 1]))
    env = np.interp(np.arange(n), peaks, a[peaks])
    return float(np.trapezoid(env))


def envelope_area_feature(profile: TeoProfile, frame_ms: float = 25.0, scale: float = 1000.0,
                          floor_db: float = -80.0) -> TeoEnvelopeFeature:
    if frame_ms <= 0:
        raise ValueError("frame_ms must be positive")
    frame_len = ms_to_samples(frame_ms, profile.sample_rate_hz)
    n_lags = frame_len // 2
    if n_lags < 1:
        raise ValueError("frame too short for an autocorrelation envelope")
    per_band = []
    for seq in profile.bands:
        frames = frame_samples(seq, frame_len, frame_len)
        norm, r0 = normalized_autocorrelation(frames, n_lags)
        per_band.append((norm, r0))
    top = max(r0.max() for _, r0 in per_band)
    if not top > 0:
        raise AllSilentFrames("every TEO frame has zero energy")
    floor = top * 10 ** (floor_db / 10)
    n_frames = max(norm.shape[0] for norm, _ in per_band)
    areas = np.full((len(per_band), n_frames), np.nan)
    for b, (norm, r0) in enumerate(per_band):
        for i in np.flatnonzero(r0 > floor):
            areas[b, i] = envelope_area(norm[i])
    z1 = scale * float(np.nanmean(areas)) / n_lags
    return TeoEnvelopeFeature(areas, n_lags, z1)


def teo_cb_auto_env(signal: AudioSignal, n_bands: int = 16, frame_ms: float = 25.0,
                    scale: float = 1000.0) -> TeoEnvelopeFeature:
    return envelope_area_feature(teo_profile(signal, n_bands, frame_ms), frame_ms, scale)
