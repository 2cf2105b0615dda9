"""EMO-DB file-name ingestion, batch feature extraction, calibration and evaluation reports."""
from __future__ import annotations

import csv
import io
import json
import re
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .audio import load_wav
from .classifier import LABELS, EmotionLabel, ThresholdConfig, calibrate, classify
from .errors import EmptyCorpus, MalformedName, UnknownEmotionLetter
from .features import FEATURE_NAMES, AnalysisParams, FeatureVector, extract_features

# EMO-DB: speaker (2 digits), text code (letter + 2 digits), emotion letter, version letter
NAME_RE = re.compile(r"^(\d{2})([a-z]\d{2})([A-Z])([a-z])\.wav$")
EMOTION_LETTERS = {
    "W": EmotionLabel.ANGER,
    "L": EmotionLabel.BOREDOM,
    "E": EmotionLabel.DISGUST,
    "A": None,  # fear: listed, never classified
    "F": EmotionLabel.HAPPY,
    "T": EmotionLabel.SAD,
    "N": EmotionLabel.NEUTRAL,
}
LETTER_FOR = {lab: letter for letter, lab in EMOTION_LETTERS.items() if lab is not None}


@dataclass(frozen=True)
class CorpusEntry:
    path: Path
    speaker_id: str
    text_code: str
    emotion: EmotionLabel | None
    version: str

    @property
    def excluded(self) -> bool:
        return self.emotion is None


def parse_emodb_filename(name) -> CorpusEntry:
    path = Path(name)
    m = NAME_RE.match(path.name)
    if not m:
        # distinguish a bad emotion letter from a wholly foreign name
        loose = re.match(r"^\d{2}[a-z]\d{2}(.)[a-z]\.wav$", path.name)
        if loose:
            raise UnknownEmotionLetter(f"{path.name}: emotion letter {loose.group(1)!r}")
        raise MalformedName(f"{path.name}: expected SSTTTEV.wav, e.g. 03a01Wa.wav")
    speaker, text, letter, version = m.groups()
    if letter not in EMOTION_LETTERS:
        raise UnknownEmotionLetter(f"{path.name}: emotion letter {letter!r}")
    return CorpusEntry(path, speaker, text, EMOTION_LETTERS[letter], version)


def emodb_name(speaker: str, text: str, emotion: EmotionLabel | str, version: str = "a") -> str:
    return f"{speaker}{text}{LETTER_FOR[EmotionLabel(emotion)]}{version}.wav"


def list_wavs(inputs) -> list[Path]:
    """Expand directories to their *.wav files; result sorted by path."""
    out = []
    for item in inputs:
        p = Path(item)
        if p.is_dir():
            out.extend(q for q in p.iterdir() if q.suffix.lower() == ".wav")
        else:
            out.append(p)
    return sorted(out)


def _extract_one(job):
    path, params = job
    try:
        return extract_features(load_wav(path), params), None
    except Exception as exc:  # isolate per-file failures
        stage = getattr(exc, "stage", None)
        prefix = f"[{stage}] " if stage else ""
        return None, f"{prefix}{type(exc).__name__}: {exc}"


def extract_many(paths, params: AnalysisParams = AnalysisParams(), jobs: int = 1):
    """[(path, FeatureVector | None, error | None)] in input order, computed on ``jobs`` processes."""
    paths = list(paths)
    work = [(p, params) for p in paths]
    if jobs > 1 and len(paths) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            results = list(pool.map(_extract_one, work))
    else:
        results = [_extract_one(w) for w in work]
    return [(p, fv, err) for p, (fv, err) in zip(paths, results)]


def features_csv(rows) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(("path",) + FEATURE_NAMES + ("error",))
    for path, fv, err in rows:
        if fv is None:
            writer.writerow((str(path),) + ("",) * len(FEATURE_NAMES) + (err,))
        else:
            writer.writerow((str(path),) + tuple(repr(getattr(fv, n)) for n in FEATURE_NAMES) + ("",))
    return buf.getvalue()


def run_extract(inputs, params: AnalysisParams = AnalysisParams(), jobs: int = 1) -> str:
    return features_csv(extract_many(list_wavs(inputs), params, jobs))


def scan_corpus(corpus_dir) -> tuple[list[CorpusEntry], list[CorpusEntry]]:
    """(classifiable, excluded) entries of an EMO-DB style directory, sorted by path."""
    corpus_dir = Path(corpus_dir)
    if not corpus_dir.is_dir():
        raise FileNotFoundError(corpus_dir)
    entries = [parse_emodb_filename(p) for p in list_wavs([corpus_dir])]
    keep = [e for e in entries if not e.excluded]
    if not keep:
        raise EmptyCorpus(f"{corpus_dir}: no classifiable EMO-DB files")
    return keep, [e for e in entries if e.excluded]


@dataclass
class EvaluationReport:
    files: list = field(default_factory=list)
    excluded: list = field(default_factory=list)
    errors: list = field(default_factory=list)
    confusion: np.ndarray = field(default_factory=lambda: np.zeros((6, 6), dtype=int))

    @property
    def n_classified(self) -> int:
        return int(self.confusion.sum())

    @property
    def accuracy(self) -> float:
        return float(np.trace(self.confusion) / self.n_classified) if self.n_classified else 0.0

    def precision(self) -> dict:
        col = self.confusion.sum(axis=0)
        return {lab.value: float(self.confusion[i, i] / col[i]) if col[i] else 0.0 for i, lab in enumerate(LABELS)}

    def recall(self) -> dict:
        row = self.confusion.sum(axis=1)
        return {lab.value: float(self.confusion[i, i] / row[i]) if row[i] else 0.0 for i, lab in enumerate(LABELS)}

    def to_dict(self) -> dict:
        return {
            "labels": [lab.value for lab in LABELS],
            "confusion": self.confusion.tolist(),
            "accuracy": self.accuracy,
            "precision": self.precision(),
            "recall": self.recall(),
            "n_classified": self.n_classified,
            "files": self.files,
            "excluded": self.excluded,
            "errors": self.errors,
            "spectrum_convention": "one-sided unnormalized |DFT|; sum |X_full|^2 = N * sum x^2",
        }

    def to_json(self) -> str:
        return json.dumps(_round_floats(self.to_dict()), sort_keys=True, indent=2) + "\n"

    def table(self) -> str:
        names = [lab.value[:7] for lab in LABELS]
        lines = ["truth \\ pred " + " ".join(f"{n:>7}" for n in names)]
        for i, lab in enumerate(LABELS):
            lines.append(f"{lab.value:<12} " + " ".join(f"{v:>7d}" for v in self.confusion[i]))
        lines.append(f"accuracy {self.accuracy:.4f} over {self.n_classified} files"
                     f" ({len(self.excluded)} excluded, {len(self.errors)} errors)")
        return "\n".join(lines)


def _round_floats(obj):
    # 6 significant digits keeps reports byte-stable across platforms
    if isinstance(obj, float):
        return float(f"{obj:.6g}")
    if isinstance(obj, dict):
        return {k: _round_floats(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_round_floats(v) for v in obj]
    return obj


def _trace_dict(trace) -> list:
    return [
        {"stage": s.stage, "feature": s.feature, "value": s.value, "threshold": s.threshold,
         "direction": s.direction, "taken": s.taken, "verdict": s.verdict}
        for s in trace.steps
    ]


def evaluate_features(labeled_rows, config: ThresholdConfig, excluded=()) -> EvaluationReport:
    """labeled_rows: [(CorpusEntry, FeatureVector | None, error | None)]."""
    report = EvaluationReport(excluded=[str(e.path) for e in excluded])
    index = {lab: i for i, lab in enumerate(LABELS)}
    for entry, fv, err in labeled_rows:
        if fv is None:
            report.errors.append({"path": str(entry.path), "error": err})
            continue
        label, trace = classify(fv, config)
        report.confusion[index[entry.emotion], index[label]] += 1
        report.files.append({
            "path": str(entry.path),
            "truth": entry.emotion.value,
            "predicted": label.value,
            "features": fv.as_dict(),
            "trace": _trace_dict(trace),
            "warnings": list(trace.warnings),
        })
    return report


def run_evaluate(corpus_dir, config: ThresholdConfig, params: AnalysisParams = AnalysisParams(),
                 jobs: int = 1) -> EvaluationReport:
    keep, excluded = scan_corpus(corpus_dir)
    rows = extract_many([e.path for e in keep], params, jobs)
    return evaluate_features([(e, fv, err) for e, (_, fv, err) in zip(keep, rows)], config, excluded)


def run_calibrate(corpus_dir, params: AnalysisParams = AnalysisParams(), jobs: int = 1) -> ThresholdConfig:
    keep, _ = scan_corpus(corpus_dir)
    rows = extract_many([e.path for e in keep], params, jobs)
    labeled = [(fv, e.emotion) for e, (_, fv, _) in zip(keep, rows) if fv is not None]
    return calibrate(labeled)


def load_config(path) -> ThresholdConfig:
    return ThresholdConfig.loads(Path(path).read_text())


def save_config(config: ThresholdConfig, path) -> None:
    Path(path).write_text(config.dumps())
