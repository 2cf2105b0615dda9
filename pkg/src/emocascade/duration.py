"""Per-frame phoneme-class labelling (vowel / semivowel / consonant / silence) and durations."""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .audio import AudioSignal, frame_signal, power_spectra
from .errors import TrackLengthMismatch
from .formants import FormantSet

VOWEL, SEMIVOWEL, CONSONANT, SILENCE = "vowel", "semivowel", "consonant", "silence"
CLASSES = (VOWEL, SEMIVOWEL, CONSONANT, SILENCE)

LOW_BAND_HZ = (0.0, 300.0)
MID_BAND_HZ = (640.0, 2800.0)


@dataclass(frozen=True)
class SegmentRules:
    vowel_min_formants: int = 3
    vowel_max_f1_hz: float = 1000.0
    # vowel takes every frame with F1 below vowel_max_f1_hz first; the ceiling
    # keeps fricative noise with high "formants" out of the semivowel class
    semivowel_max_f1_hz: float = 1500.0
    semivowel_f2_f1_hz: tuple[float, float] = (300.0, 1200.0)
    semivowel_f3_f2_hz: tuple[float, float] = (200.0, 1500.0)
    semivowel_f4_f2_hz: tuple[float, float] = (800.0, 2800.0)
    silence_floor_db: float = -60.0


@dataclass(frozen=True)
class PhonemeClassTrack:
    labels: tuple[str, ...]
    frame_hop_s: float

    def __len__(self):
        return len(self.labels)


@dataclass(frozen=True)
class DurationSummary:
    vowel_s: float = 0.0
    semivowel_s: float = 0.0
    consonant_s: float = 0.0
    frame_counts: dict = field(default_factory=dict, compare=False)

    @property
    def total_speech_s(self) -> float:
        return self.vowel_s + self.semivowel_s + self.consonant_s

    @property
    def mean_word_duration(self) -> float:
        # no word segmentation here; the whole speech span counts as one word
        return self.total_speech_s


def band_energies(power: np.ndarray, bin_hz: float) -> np.ndarray:
    """(n_frames, 3) array: energy in 0-300 Hz, in 640-2800 Hz, and over the whole frame."""
    freqs = np.arange(power.shape[1]) * bin_hz
    low = (freqs >= LOW_BAND_HZ[0]) & (freqs <= LOW_BAND_HZ[1])
    mid = (freqs >= MID_BAND_HZ[0]) & (freqs <= MID_BAND_HZ[1])
    return np.column_stack((power[:, low].sum(axis=1), power[:, mid].sum(axis=1), power.sum(axis=1)))


def _inside(value, window):
    return window[0] <= value <= window[1]


def _label(formants: FormantSet, total: float, floor: float, rules: SegmentRules) -> str:
    if total < floor or total <= 0:
        return SILENCE
    f = formants.frequencies
    if len(formants) >= rules.vowel_min_formants and f[0] < rules.vowel_max_f1_hz:
        return VOWEL
    if (len(formants) >= 4
            and f[0] < rules.semivowel_max_f1_hz
            and _inside(f[1] - f[0], rules.semivowel_f2_f1_hz)
            and _inside(f[2] - f[1], rules.semivowel_f3_f2_hz)
            and _inside(f[3] - f[1], rules.semivowel_f4_f2_hz)):
        return SEMIVOWEL
    # Band rule (energy concentrated in 0-300 or 640-2800 Hz, fewer than 3
    # formants) and the speech-active fallback both land on consonant.
    return CONSONANT


def classify_frames(formant_track, energies, energy_floor: float, frame_hop_s: float,
                    rules: SegmentRules = SegmentRules()) -> PhonemeClassTrack:
    """Label each frame. ``energies`` rows are (e_low, e_mid) or (e_low, e_mid, e_total)."""
    energies = np.asarray(energies, dtype=float).reshape(len(energies), -1)
    if len(formant_track) != energies.shape[0]:
        raise TrackLengthMismatch(f"{len(formant_track)} formant frames vs {energies.shape[0]} energy frames")
    labels = []
    for fs, row in zip(formant_track, energies):
        total = row[2] if row.shape[0] > 2 else row[0] + row[1]
        labels.append(_label(fs, total, energy_floor, rules))
    return PhonemeClassTrack(tuple(labels), frame_hop_s)


def duration_summary(track: PhonemeClassTrack) -> DurationSummary:
    counts = {c: track.labels.count(c) for c in CLASSES}
    return DurationSummary(counts[VOWEL] * track.frame_hop_s, counts[SEMIVOWEL] * track.frame_hop_s,
                           counts[CONSONANT] * track.frame_hop_s, counts)


def phoneme_track(signal: AudioSignal, formant_track, frame_ms: float = 30.0, hop_ms: float = 15.0,
                  rules: SegmentRules = SegmentRules()) -> PhonemeClassTrack:
    """Band energies from the same framing as the formant track, silence floor relative to the loudest frame."""
    frames = frame_signal(signal, frame_ms, hop_ms, "hamming")
    power, bin_hz = power_spectra(frames)
    energies = band_energies(power, bin_hz)
    peak = energies[:, 2].max()
    floor = peak * 10 ** (rules.silence_floor_db / 10)
    return classify_frames(formant_track, energies, floor, frames.hop_s, rules)
