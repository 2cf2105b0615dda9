"""Whole-utterance spectral bandwidth and MFCC."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.fft import dct

from .audio import AudioSignal, frame_signal, next_pow2, power_spectra
from .errors import EmptySignal, NegativeFrequency, SignalTooShort, SilentSignal

LOG_FLOOR = 1e-10


@dataclass(frozen=True)
class SpectralBandwidth:
    f_min_hz: float
    f_max_hz: float

    @property
    def bw_hz(self) -> float:
        return self.f_max_hz - self.f_min_hz


@dataclass(frozen=True)
class MfccMatrix:
    coefficients: np.ndarray  # (n_frames, n_coeffs)

    @property
    def n_coeffs(self) -> int:
        return self.coefficients.shape[1]

    @property
    def mean_mfcc(self) -> float:
        """Grand mean over all frames of coefficients 1..n-1 (c0 tracks loudness and is left out)."""
        return float(np.mean(self.coefficients[:, 1:]))


def mel_scale(f_hz):
    f = np.asarray(f_hz, dtype=float)
    if np.any(f < 0):
        raise NegativeFrequency("frequency must be non-negative")
    mel = 2595.0 * np.log10(1.0 + f / 700.0)
    return float(mel) if mel.ndim == 0 else mel


def mel_to_hz(mel):
    return 700.0 * (10.0 ** (np.asarray(mel, dtype=float) / 2595.0) - 1.0)


def mel_filterbank(n_filters: int, fft_size: int, sample_rate_hz: float) -> np.ndarray:
    """Triangular filters, edges equally spaced in mel from 0 to Nyquist, each scaled to peak 1.

    Returns an (n_filters, fft_size // 2 + 1) weight matrix.
    """
    edges = mel_to_hz(np.linspace(0.0, mel_scale(sample_rate_hz / 2), n_filters + 2))
    freqs = np.arange(fft_size // 2 + 1) * sample_rate_hz / fft_size
    bank = np.zeros((n_filters, freqs.shape[0]))
    for m in range(n_filters):
        lo, mid, hi = edges[m : m + 3]
        rising = (freqs - lo) / (mid - lo)
        falling = (hi - freqs) / (hi - mid)
        bank[m] = np.clip(np.minimum(rising, falling), 0.0, None)
        peak = bank[m].max()
        if peak > 0:
            bank[m] /= peak
    return bank


def mfcc(signal: AudioSignal, n_filters: int = 26, n_coeffs: int = 13, frame_ms: float = 30.0,
         hop_ms: float = 15.0) -> MfccMatrix:
    if n_coeffs > n_filters:
        raise ValueError("n_coeffs must not exceed n_filters")
    frame_length = int(round(frame_ms / 1000 * signal.sample_rate_hz))
    if len(signal) <= frame_length:
        raise SignalTooShort(f"{len(signal)} samples, need more than one {frame_length}-sample frame")
    frames = frame_signal(signal, frame_ms, hop_ms, "hamming")
    fft_size = next_pow2(frames.frame_length)
    power, _ = power_spectra(frames, fft_size)
    energies = power @ mel_filterbank(n_filters, fft_size, signal.sample_rate_hz).T
    log_energies = np.log(np.maximum(energies, LOG_FLOOR))
    ceps = dct(log_energies, type=2, norm="ortho", axis=1)[:, :n_coeffs]
    return MfccMatrix(ceps)


def average_spectrum(signal: AudioSignal, frame_ms: float = 30.0, hop_ms: float = 15.0) -> tuple[np.ndarray, float]:
    """Mean magnitude spectrum over Hamming frames; returns (bins, bin_hz)."""
    if len(signal) == 0:
        raise EmptySignal("no samples")
    frames = frame_signal(signal, frame_ms, hop_ms, "hamming")
    power, bin_hz = power_spectra(frames)
    return np.sqrt(power).mean(axis=0), bin_hz


def spectral_peaks(spec: np.ndarray) -> np.ndarray:
    """Indices of local maxima (plateaus count; end bins compare against one neighbour)."""
    padded = np.concatenate(([-np.inf], spec, [-np.inf]))
    return np.flatnonzero((spec >= padded[:-2]) & (spec >= padded[2:]))


def vocal_tract_bandwidth(signal: AudioSignal, rel_threshold_db: float = -20.0, frame_ms: float = 30.0,
                          hop_ms: float = 15.0) -> SpectralBandwidth:
    """Span between the lowest and highest spectral peaks within ``rel_threshold_db`` of the maximum.

    Peaks rather than raw bins are used so window leakage around a component
    does not widen the span.
    """
    if rel_threshold_db >= 0:
        raise ValueError("rel_threshold_db must be negative")
    spec, bin_hz = average_spectrum(signal, frame_ms, hop_ms)
    top = spec.max()
    if top <= 0:
        raise SilentSignal("spectrum is identically zero")
    peaks = spectral_peaks(spec)
    active = peaks[spec[peaks] >= top * 10 ** (rel_threshold_db / 20)]
    return SpectralBandwidth(float(active[0] * bin_hz), float(active[-1] * bin_hz))
