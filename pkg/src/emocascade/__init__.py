"""Linear and Teager-energy speech features with a hierarchical emotion cascade."""
from .audio import AudioSignal, load_wav
from .classifier import EmotionLabel, ThresholdConfig, calibrate, classify
from .features import AnalysisParams, FeatureVector, extract_features

__all__ = [
    "AnalysisParams",
    "AudioSignal",
    "EmotionLabel",
    "FeatureVector",
    "ThresholdConfig",
    "calibrate",
    "classify",
    "extract_features",
    "load_wav",
]
