"""Audio ingestion, framing, windowing and spectrum utilities."""
from __future__ import annotations

import math
import wave
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .errors import CorruptHeader, EmptySignal, NonPowerOfTwoSize, UnsupportedFormat

PCM_SCALE = 32768.0
WINDOWS = ("rectangular", "hamming")


@dataclass(frozen=True)
class AudioSignal:
    samples: np.ndarray
    sample_rate_hz: int

    def __post_init__(self):
        samples = np.asarray(self.samples, dtype=float)
        if samples.ndim != 1:
            raise ValueError("samples must be one-dimensional")
        if self.sample_rate_hz <= 0:
            raise ValueError("sample_rate_hz must be positive")
        if not np.all(np.isfinite(samples)):
            raise ValueError("samples must be finite")
        samples.setflags(write=False)
        object.__setattr__(self, "samples", samples)
        object.__setattr__(self, "sample_rate_hz", int(self.sample_rate_hz))

    def __len__(self):
        return self.samples.shape[0]

    @property
    def duration_s(self) -> float:
        return len(self) / self.sample_rate_hz

    def scaled(self, factor: float) -> "AudioSignal":
        return AudioSignal(self.samples * factor, self.sample_rate_hz)


@dataclass(frozen=True)
class FrameSequence:
    frames: np.ndarray  # (n_frames, frame_length)
    frame_length: int
    hop_length: int
    window_kind: str
    sample_rate_hz: int

    def __len__(self):
        return self.frames.shape[0]

    @property
    def hop_s(self) -> float:
        return self.hop_length / self.sample_rate_hz


@dataclass(frozen=True)
class MagnitudeSpectrum:
    """One-sided, unnormalized |DFT| (sum over all N full-DFT bins of |X|^2 equals N * sum x^2)."""

    bins: np.ndarray
    bin_hz: float

    @property
    def frequencies(self) -> np.ndarray:
        return np.arange(self.bins.shape[0]) * self.bin_hz


def load_wav(path) -> AudioSignal:
    """Read a 16-bit PCM RIFF/WAVE file; stereo is averaged to mono, samples divided by 32768."""
    path = Path(path)
    if not path.is_file():
        raise FileNotFoundError(path)
    try:
        with wave.open(str(path), "rb") as fh:
            n_channels = fh.getnchannels()
            width = fh.getsampwidth()
            rate = fh.getframerate()
            n_frames = fh.getnframes()
            raw = fh.readframes(n_frames)
    except wave.Error as exc:
        if "unknown format" in str(exc):
            raise UnsupportedFormat(f"{path}: {exc}") from exc
        raise CorruptHeader(f"{path}: {exc}") from exc
    except EOFError as exc:
        raise CorruptHeader(f"{path}: truncated header") from exc
    if width != 2:
        raise UnsupportedFormat(f"{path}: {8 * width}-bit samples, only 16-bit PCM is supported")
    if n_channels < 1 or rate <= 0:
        raise CorruptHeader(f"{path}: {n_channels} channels at {rate} Hz")
    usable = len(raw) - len(raw) % (2 * n_channels)
    data = np.frombuffer(raw[:usable], dtype="<i2").astype(float) / PCM_SCALE
    data = data.reshape(-1, n_channels).mean(axis=1)
    return AudioSignal(data, rate)


def write_wav(path, signal: AudioSignal) -> None:
    """Write mono 16-bit PCM; samples are clipped to the int16 range."""
    ints = np.clip(np.round(signal.samples * PCM_SCALE), -32768, 32767).astype("<i2")
    with wave.open(str(path), "wb") as fh:
        fh.setnchannels(1)
        fh.setsampwidth(2)
        fh.setframerate(signal.sample_rate_hz)
        fh.writeframes(ints.tobytes())


def make_window(kind: str, length: int) -> np.ndarray:
    if kind == "rectangular":
        return np.ones(length)
    if kind == "hamming":
        return np.hamming(length)
    raise ValueError(f"unknown window {kind!r}, expected one of {WINDOWS}")


def ms_to_samples(ms: float, sample_rate_hz: int) -> int:
    return max(1, int(round(ms / 1000.0 * sample_rate_hz)))


def frame_count(n_samples: int, frame_length: int, hop_length: int) -> int:
    if n_samples <= frame_length:
        return 1
    return math.ceil((n_samples - frame_length) / hop_length) + 1


def frame_samples(samples: np.ndarray, frame_length: int, hop_length: int) -> np.ndarray:
    """Slice into overlapping frames, zero-padding the tail. No window applied."""
    if hop_length < 1 or hop_length > frame_length:
        raise ValueError("need 1 <= hop_length <= frame_length")
    n = frame_count(samples.shape[0], frame_length, hop_length)
    padded = np.zeros((n - 1) * hop_length + frame_length)
    padded[: samples.shape[0]] = samples
    idx = np.arange(frame_length)[None, :] + hop_length * np.arange(n)[:, None]
    return padded[idx]


def frame_signal(signal: AudioSignal, frame_ms: float, hop_ms: float, window_kind: str = "hamming") -> FrameSequence:
    if frame_ms <= 0 or hop_ms <= 0:
        raise ValueError("frame_ms and hop_ms must be positive")
    if len(signal) == 0:
        raise EmptySignal("cannot frame an empty signal")
    frame_length = ms_to_samples(frame_ms, signal.sample_rate_hz)
    hop_length = min(ms_to_samples(hop_ms, signal.sample_rate_hz), frame_length)
    frames = frame_samples(signal.samples, frame_length, hop_length)
    frames = frames * make_window(window_kind, frame_length)
    return FrameSequence(frames, frame_length, hop_length, window_kind, signal.sample_rate_hz)


def next_pow2(n: int) -> int:
    return 1 << max(0, int(n) - 1).bit_length()


def magnitude_spectrum(frame, fft_size: int, sample_rate_hz: float = 1.0) -> MagnitudeSpectrum:
    frame = np.asarray(frame, dtype=float)
    if fft_size < 1 or fft_size & (fft_size - 1):
        raise NonPowerOfTwoSize(f"fft_size {fft_size} is not a power of two")
    if fft_size < frame.shape[-1]:
        raise ValueError("fft_size shorter than the frame")
    bins = np.abs(np.fft.rfft(frame, n=fft_size))
    return MagnitudeSpectrum(bins, sample_rate_hz / fft_size)


def power_spectra(frames: FrameSequence, fft_size: int | None = None) -> tuple[np.ndarray, float]:
    """|X|^2 for every frame at once; returns (matrix, bin_hz)."""
    if fft_size is None:
        fft_size = next_pow2(frames.frame_length)
    spec = np.abs(np.fft.rfft(frames.frames, n=fft_size, axis=1)) ** 2
    return spec, frames.sample_rate_hz / fft_size
