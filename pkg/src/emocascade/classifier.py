"""Hierarchical six-emotion threshold cascade and its calibration.

Cascade::

    z1 > th_teo ?
      yes -> f1 > th_formant_f1 ? anger : disgust
      no  -> vt_bw on happy side ? happy
             : duration on sad side ? sad
             : mfcc_mean > th_mfcc ? boredom : neutral

All comparisons are strict, so a value equal to its threshold takes the
calmer branch.
"""
from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from enum import Enum

import numpy as np

from .errors import ConfigParseError, InsufficientClassCoverage, NonFiniteFeature
from .features import FeatureVector

log = logging.getLogger(__name__)


class EmotionLabel(str, Enum):
    NEUTRAL = "neutral"
    HAPPY = "happy"
    DISGUST = "disgust"
    SAD = "sad"
    BOREDOM = "boredom"
    ANGER = "anger"

    @property
    def shout(self) -> str:
        return "ANGRY" if self is EmotionLabel.ANGER else self.name


E = EmotionLabel
LABELS = tuple(EmotionLabel)
AROUSED = frozenset({E.ANGER, E.DISGUST})
CALM = frozenset({E.NEUTRAL, E.HAPPY, E.SAD, E.BOREDOM})


@dataclass(frozen=True)
class Stage:
    name: str
    feature: str
    threshold: str
    population: frozenset
    positive: EmotionLabel | frozenset
    fixed_direction: str | None


STAGES = (
    Stage("teo", "z1", "th_teo", frozenset(LABELS), AROUSED, "gt"),
    Stage("formant", "f1_hz", "th_formant_f1", AROUSED, E.ANGER, "gt"),
    Stage("vt_bw", "vt_bw", "th_vtbw", CALM, E.HAPPY, None),
    Stage("duration", "duration_s", "th_duration", frozenset({E.NEUTRAL, E.SAD, E.BOREDOM}), E.SAD, None),
    Stage("mfcc", "mfcc_mean", "th_mfcc", frozenset({E.NEUTRAL, E.BOREDOM}), E.BOREDOM, "gt"),
)
STAGE_BY_NAME = {s.name: s for s in STAGES}
DIRECTIONS = ("gt", "lt")


@dataclass(frozen=True)
class ThresholdConfig:
    th_teo: float
    th_formant_f1: float
    th_vtbw: float
    th_duration: float
    th_mfcc: float
    dir_vtbw: str = "gt"
    dir_duration: str = "gt"
    stage_accuracy: dict = field(default_factory=dict, hash=False)

    def __post_init__(self):
        for s in STAGES:
            if not math.isfinite(getattr(self, s.threshold)):
                raise ConfigParseError(f"{s.threshold} must be finite")
        for d in (self.dir_vtbw, self.dir_duration):
            if d not in DIRECTIONS:
                raise ConfigParseError(f"direction must be one of {DIRECTIONS}, got {d!r}")

    def direction(self, stage: str) -> str:
        return {"vt_bw": self.dir_vtbw, "duration": self.dir_duration}.get(stage, "gt")

    @property
    def flags(self) -> tuple[str, ...]:
        """Stages whose training accuracy fell short of 1."""
        return tuple(s for s, acc in self.stage_accuracy.items() if acc < 1.0)

    def dumps(self) -> str:
        lines = [f"{s.threshold} = {getattr(self, s.threshold)!r}" for s in STAGES]
        lines += [f"direction.{s.name} = {self.direction(s.name)}" for s in STAGES]
        lines += [f"accuracy.{name} = {acc!r}" for name, acc in self.stage_accuracy.items()]
        return "\n".join(lines) + "\n"

    @classmethod
    def loads(cls, text: str) -> "ThresholdConfig":
        values, dirs, acc = {}, {}, {}
        for lineno, raw in enumerate(text.splitlines(), 1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            key, sep, value = (part.strip() for part in line.partition("="))
            if not sep or not value:
                raise ConfigParseError(f"line {lineno}: expected 'name = value'")
            try:
                if key.startswith("direction."):
                    dirs[key[len("direction."):]] = value
                elif key.startswith("accuracy."):
                    acc[key[len("accuracy."):]] = float(value)
                elif key in {s.threshold for s in STAGES}:
                    values[key] = float(value)
                else:
                    raise ConfigParseError(f"line {lineno}: unknown key {key!r}")
            except ValueError as exc:
                raise ConfigParseError(f"line {lineno}: {exc}") from exc
        missing = [s.threshold for s in STAGES if s.threshold not in values]
        if missing:
            raise ConfigParseError(f"missing thresholds: {', '.join(missing)}")
        for name, d in dirs.items():
            stage = STAGE_BY_NAME.get(name)
            if stage is None:
                raise ConfigParseError(f"unknown stage {name!r}")
            if stage.fixed_direction and d != stage.fixed_direction:
                raise ConfigParseError(f"direction.{name} is fixed to {stage.fixed_direction}")
        return cls(dir_vtbw=dirs.get("vt_bw", "gt"), dir_duration=dirs.get("duration", "gt"),
                   stage_accuracy=acc, **values)


def on_marked_side(value: float, threshold: float, direction: str) -> bool:
    return value > threshold if direction == "gt" else value < threshold


@dataclass(frozen=True)
class TraceStep:
    stage: str
    feature: str
    value: float
    threshold: float
    direction: str
    taken: bool  # True when the marked (first-listed) branch was chosen
    verdict: str  # label group still in play after this stage


@dataclass(frozen=True)
class ClassificationTrace:
    steps: tuple
    label: EmotionLabel
    warnings: tuple = ()


def _group(*labels) -> str:
    return "/".join(lab.shout for lab in labels)


def classify(features: FeatureVector, config: ThresholdConfig) -> tuple[EmotionLabel, ClassificationTrace]:
    for name in ("z1", "f1_hz", "vt_bw", "duration_s", "mfcc_mean"):
        if not math.isfinite(getattr(features, name)):
            raise NonFiniteFeature(name)
    steps, warnings = [], []

    def step(stage_name, taken, verdict):
        s = STAGE_BY_NAME[stage_name]
        steps.append(TraceStep(stage_name, s.feature, getattr(features, s.feature), getattr(config, s.threshold),
                               config.direction(stage_name), taken, verdict))

    def decide(stage_name):
        s = STAGE_BY_NAME[stage_name]
        return on_marked_side(getattr(features, s.feature), getattr(config, s.threshold), config.direction(stage_name))

    if decide("teo"):
        step("teo", True, _group(E.DISGUST, E.ANGER))
        if features.f1_hz <= 0:
            warnings.append("no formants found in the aroused branch; defaulting to disgust")
            taken = False
        else:
            taken = decide("formant")
        label = E.ANGER if taken else E.DISGUST
        step("formant", taken, label.shout)
    else:
        step("teo", False, _group(E.NEUTRAL, E.BOREDOM, E.SAD, E.HAPPY))
        if decide("vt_bw"):
            label = E.HAPPY
            step("vt_bw", True, label.shout)
        else:
            step("vt_bw", False, _group(E.BOREDOM, E.SAD, E.NEUTRAL))
            if decide("duration"):
                label = E.SAD
                step("duration", True, label.shout)
            else:
                step("duration", False, _group(E.NEUTRAL, E.BOREDOM))
                label = E.BOREDOM if decide("mfcc") else E.NEUTRAL
                step("mfcc", label is E.BOREDOM, label.shout)
    return label, ClassificationTrace(tuple(steps), label, tuple(warnings))


def replay(trace: ClassificationTrace) -> EmotionLabel:
    """Label implied by the recorded branch decisions alone."""
    taken = {s.stage: s.taken for s in trace.steps}
    if taken["teo"]:
        return E.ANGER if taken["formant"] else E.DISGUST
    if taken["vt_bw"]:
        return E.HAPPY
    if taken["duration"]:
        return E.SAD
    return E.BOREDOM if taken["mfcc"] else E.NEUTRAL


def format_trace(trace: ClassificationTrace) -> str:
    """Two console lines per decision: the compared value, then the verdict."""
    lines = []
    for s in trace.steps:
        lines.append(f"{s.feature} = {s.value:.4f}   (threshold {s.threshold:.4f}, {s.direction})")
        lines.append(f"Speech signal indicates {s.verdict} emotion")
    lines += [f"warning: {w}" for w in trace.warnings]
    return "\n".join(lines)


def split_accuracy(values, is_positive, threshold: float, direction: str) -> float:
    values = np.asarray(values, dtype=float)
    pred = values > threshold if direction == "gt" else values < threshold
    return float(np.mean(pred == np.asarray(is_positive, dtype=bool)))


def best_split(values, is_positive, direction: str) -> tuple[float, float]:
    """Threshold maximising binary accuracy, scanning midpoints of sorted distinct values.

    Two sentinel candidates outside the data range cover the one-sided
    splits. Ties go to the lowest threshold.
    """
    values = np.asarray(values, dtype=float)
    is_positive = np.asarray(is_positive, dtype=bool)
    u = np.unique(values)
    candidates = np.concatenate(([u[0] - 1.0], (u[:-1] + u[1:]) / 2, [u[-1] + 1.0]))
    if direction == "gt":
        pred = values[None, :] > candidates[:, None]
    else:
        pred = values[None, :] < candidates[:, None]
    acc = np.mean(pred == is_positive[None, :], axis=1)
    best = int(np.argmax(acc))  # first maximiser = lowest threshold
    return float(candidates[best]), float(acc[best])


def calibrate(labeled) -> ThresholdConfig:
    """Fit every stage threshold on the examples routed to that stage.

    Fixed-direction stages that cannot reach full accuracy are reported in
    ``ThresholdConfig.flags`` rather than flipped.
    """
    labeled = [(fv, EmotionLabel(lab)) for fv, lab in labeled]
    thresholds, directions, accuracy = {}, {}, {}
    for s in STAGES:
        subset = [(fv, lab) for fv, lab in labeled if lab in s.population]
        positives = s.positive if isinstance(s.positive, frozenset) else frozenset({s.positive})
        values = [getattr(fv, s.feature) for fv, _ in subset]
        is_pos = [lab in positives for _, lab in subset]
        if not any(is_pos) or all(is_pos):
            side = "negative" if subset and all(is_pos) else "positive"
            raise InsufficientClassCoverage(s.name, f"no {side} examples for the {s.feature} split")
        options = [s.fixed_direction] if s.fixed_direction else list(DIRECTIONS)
        fits = [(best_split(values, is_pos, d), d) for d in options]
        (th, acc), d = max(fits, key=lambda item: item[0][1])  # max keeps the first ("gt") on ties
        thresholds[s.threshold] = th
        directions[s.name] = d
        accuracy[s.name] = acc
        if acc < 1.0:
            log.warning("stage %s: training accuracy %.3f with direction %s", s.name, acc, d)
    return ThresholdConfig(dir_vtbw=directions["vt_bw"], dir_duration=directions["duration"],
                           stage_accuracy=accuracy, **thresholds)
