import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from emocascade.duration import (CLASSES, CONSONANT, SEMIVOWEL, SILENCE, VOWEL, PhonemeClassTrack,
                                 SegmentRules, classify_frames, duration_summary, phoneme_track)
from emocascade.errors import TrackLengthMismatch
from emocascade.formants import FormantSet, formants_per_frame
from emocascade.synth import bandpass_noise, synth_vowel


def fset(*freqs):
    n = len(freqs)
    return FormantSet(np.array(freqs, dtype=float), np.full(n, 100.0), np.full(n, 0.95))


def test_three_formant_frame_is_vowel():
    track = classify_frames([fset(500, 1500, 2500)], [(1.0, 1.0)], 0.1, 0.015)
    assert track.labels == (VOWEL,)


def test_zero_energy_is_silence():
    track = classify_frames([fset(500, 1500, 2500)] * 4, np.zeros((4, 2)), 0.0, 0.015)
    assert track.labels == (SILENCE,) * 4


def test_semivowel_windows():
    # F1 above the vowel ceiling, differences inside every window
    track = classify_frames([fset(1100, 1700, 2400, 3000)], [(1.0, 1.0)], 0.1, 0.015)
    assert track.labels == (SEMIVOWEL,)
    track = classify_frames([fset(1100, 1200, 2400, 3000)], [(1.0, 1.0)], 0.1, 0.015)
    assert track.labels == (CONSONANT,)


def test_sparse_formants_fall_back_to_consonant():
    track = classify_frames([fset(), fset(3000)], [(1.0, 0.1), (0.1, 1.0)], 0.1, 0.015)
    assert track.labels == (CONSONANT, CONSONANT)


def test_fricative_noise_is_consonant():
    sig = bandpass_noise(4000, 7900, seed=1)
    track = phoneme_track(sig, formants_per_frame(sig))
    assert track.labels.count(CONSONANT) / len(track) > 0.9


def test_length_mismatch():
    with pytest.raises(TrackLengthMismatch):
        classify_frames([fset()], np.zeros((2, 2)), 0.0, 0.015)


def test_summary_counts_hops():
    s = duration_summary(PhonemeClassTrack((VOWEL,) * 100, 0.015))
    assert s.vowel_s == pytest.approx(1.5)
    assert s.total_speech_s == pytest.approx(1.5)


def test_empty_summary():
    s = duration_summary(PhonemeClassTrack((), 0.015))
    assert (s.vowel_s, s.semivowel_s, s.consonant_s, s.total_speech_s) == (0, 0, 0, 0)


@given(st.lists(st.sampled_from(CLASSES), max_size=300), st.integers(0, 50))
def test_partition_and_silence_padding(labels, n_silence):
    s = duration_summary(PhonemeClassTrack(tuple(labels), 0.015))
    assert s.vowel_s + s.semivowel_s + s.consonant_s == s.total_speech_s
    assert min(s.vowel_s, s.semivowel_s, s.consonant_s) >= 0
    padded = duration_summary(PhonemeClassTrack(tuple(labels) + (SILENCE,) * n_silence, 0.015))
    assert padded == s


def test_deterministic():
    sig = synth_vowel(duration_s=0.5)
    a = phoneme_track(sig, formants_per_frame(sig))
    b = phoneme_track(sig, formants_per_frame(sig))
    assert a == b


def test_synthetic_vowel_is_mostly_vowel():
    sig = synth_vowel()
    s = duration_summary(phoneme_track(sig, formants_per_frame(sig)))
    assert s.vowel_s / s.total_speech_s > 0.9


def test_custom_rules_are_honoured():
    rules = SegmentRules(vowel_max_f1_hz=400.0)
    track = classify_frames([fset(500, 1500, 2500)], [(1.0, 1.0)], 0.1, 0.015, rules)
    assert track.labels == (CONSONANT,)
