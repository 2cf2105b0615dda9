"""Assembles the five cascade features from one utterance."""
from __future__ import annotations

import math
from dataclasses import asdict, dataclass, field

from .audio import AudioSignal
from .duration import SegmentRules, duration_summary, phoneme_track
from .errors import AnalysisError, EmptySignal, NonFiniteFeature
from .formants import formants_per_frame, median_formants
from .spectral import mfcc, vocal_tract_bandwidth
from .teo import teo_cb_auto_env

FEATURE_NAMES = ("z1", "f1_hz", "vt_bw", "duration_s", "mfcc_mean")


@dataclass(frozen=True)
class AnalysisParams:
    frame_ms: float = 30.0
    hop_ms: float = 15.0
    lpc_order: int = 12
    pre_emphasis: float = 0.0
    n_filters: int = 26
    n_coeffs: int = 13
    threshold_db: float = -20.0
    n_bands: int = 16
    teo_frame_ms: float = 25.0
    teo_scale: float = 1000.0
    segment_rules: SegmentRules = field(default_factory=SegmentRules)


@dataclass(frozen=True)
class FeatureVector:
    z1: float
    f1_hz: float
    vt_bw: float
    duration_s: float
    mfcc_mean: float

    def __post_init__(self):
        for name in FEATURE_NAMES:
            value = getattr(self, name)
            if not math.isfinite(value):
                raise NonFiniteFeature(f"{name} = {value}")
        if self.f1_hz < 0 or self.duration_s < 0:
            raise NonFiniteFeature("f1_hz and duration_s must be non-negative")

    def as_dict(self) -> dict:
        return asdict(self)


def _stage(name, fn, *args, **kwargs):
    try:
        return fn(*args, **kwargs)
    except AnalysisError as exc:
        exc.stage = name
        raise


def extract_features(signal: AudioSignal, params: AnalysisParams = AnalysisParams()) -> FeatureVector:
    """Run every extractor on one utterance. Errors carry the failing stage in ``exc.stage``.

    ``f1_hz`` is the median F1 over frames with at least three formants, or 0
    when no such frame exists.
    """
    if len(signal) == 0:
        raise EmptySignal("no samples")
    p = params
    bw = _stage("spectral", vocal_tract_bandwidth, signal, p.threshold_db, p.frame_ms, p.hop_ms)
    ceps = _stage("mfcc", mfcc, signal, p.n_filters, p.n_coeffs, p.frame_ms, p.hop_ms)
    track = _stage("formant", formants_per_frame, signal, p.frame_ms, p.hop_ms, p.lpc_order, p.pre_emphasis)
    f_med, _ = median_formants(track, 3)
    labels = _stage("duration", phoneme_track, signal, track, p.frame_ms, p.hop_ms, p.segment_rules)
    durations = duration_summary(labels)
    teo = _stage("teo", teo_cb_auto_env, signal, p.n_bands, p.teo_frame_ms, p.teo_scale)
    return FeatureVector(
        z1=teo.z1,
        f1_hz=float(f_med[0]) if f_med.size else 0.0,
        vt_bw=bw.bw_hz,
        duration_s=durations.total_speech_s,
        mfcc_mean=ceps.mean_mfcc,
    )
