"""Command line: extract, classify, evaluate, calibrate.

Exit codes: 0 success, 1 usage error, 2 I/O error, 3 config error.
"""
from __future__ import annotations

import argparse
import json
import logging
import sys
import wave
from pathlib import Path

from . import corpus
from .audio import load_wav
from .classifier import STAGES, classify, format_trace
from .errors import (AnalysisError, ConfigParseError, CorruptHeader, EmptyCorpus, InsufficientClassCoverage,
                     MalformedName, UnknownEmotionLetter, UnsupportedFormat)
from .features import AnalysisParams, extract_features

EXIT_OK, EXIT_USAGE, EXIT_IO, EXIT_CONFIG = 0, 1, 2, 3


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="threshold config (flat 'name = value' text)")
    common.add_argument("--out", help="output path (default: stdout)")
    common.add_argument("--frame-ms", type=float, default=30.0, help="analysis frame length; hop is half of it")
    common.add_argument("--lpc-order", type=int, default=12)
    common.add_argument("--n-bands", type=int, default=16, help="critical bands for the TEO feature")
    common.add_argument("--threshold-db", type=float, default=-20.0, help="relative level for spectral bandwidth")
    common.add_argument("--jobs", type=int, default=1, help="worker processes")
    common.add_argument("-v", "--verbose", action="store_true")

    parser = _Parser(prog="emocascade", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)
    p = sub.add_parser("extract", parents=[common], help="write one CSV row of features per WAV")
    p.add_argument("inputs", nargs="+", help="WAV files or directories")
    p = sub.add_parser("classify", parents=[common], help="classify WAV files and print the decision trace")
    p.add_argument("inputs", nargs="+")
    p = sub.add_parser("evaluate", parents=[common], help="confusion matrix over an EMO-DB style directory")
    p.add_argument("corpus_dir")
    p = sub.add_parser("calibrate", parents=[common], help="fit thresholds on an EMO-DB style directory")
    p.add_argument("corpus_dir")
    return parser


def _params(args) -> AnalysisParams:
    if args.frame_ms <= 0 or args.lpc_order < 1 or args.n_bands < 1 or args.threshold_db >= 0 or args.jobs < 1:
        raise UsageError("--frame-ms, --lpc-order, --n-bands and --jobs must be positive; --threshold-db negative")
    return AnalysisParams(frame_ms=args.frame_ms, hop_ms=args.frame_ms / 2, lpc_order=args.lpc_order,
                          n_bands=args.n_bands, threshold_db=args.threshold_db)


def _emit(text: str, out) -> None:
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def _require_config(args):
    if not args.config:
        raise UsageError(f"{args.command} needs --config")
    return corpus.load_config(args.config)


def cmd_extract(args):
    _emit(corpus.run_extract(args.inputs, _params(args), args.jobs), args.out)


def cmd_classify(args):
    config = _require_config(args)
    params = _params(args)
    results = []
    for path in corpus.list_wavs(args.inputs):
        label, trace = classify(extract_features(load_wav(path), params), config)
        if not args.out:
            print(f"== {path}")
            print(format_trace(trace))
        results.append({"path": str(path), "label": label.value, "trace": corpus._trace_dict(trace),
                        "warnings": list(trace.warnings)})
    if args.out:
        Path(args.out).write_text(json.dumps(corpus._round_floats(results), sort_keys=True, indent=2) + "\n")


def cmd_evaluate(args):
    config = _require_config(args)
    report = corpus.run_evaluate(args.corpus_dir, config, _params(args), args.jobs)
    if args.out:
        Path(args.out).write_text(report.to_json())
        print(report.table())
    else:
        sys.stdout.write(report.to_json())
        print(report.table(), file=sys.stderr)


def cmd_calibrate(args):
    if not args.out:
        raise UsageError("calibrate needs --out for the config file")
    config = corpus.run_calibrate(args.corpus_dir, _params(args), args.jobs)
    corpus.save_config(config, args.out)
    for stage in STAGES:
        print(f"{stage.name:<9} {stage.threshold:<14} {getattr(config, stage.threshold):>12.6g} "
              f"{config.direction(stage.name)}  accuracy {config.stage_accuracy[stage.name]:.4f}")
    for name in config.flags:
        print(f"warning: stage {name} is not separable on this corpus", file=sys.stderr)


COMMANDS = {"extract": cmd_extract, "classify": cmd_classify, "evaluate": cmd_evaluate, "calibrate": cmd_calibrate}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s %(message)s")
    try:
        COMMANDS[args.command](args)
    except UsageError as exc:
        print(f"emocascade: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (ConfigParseError, InsufficientClassCoverage) as exc:
        print(f"emocascade: config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (OSError, wave.Error, EmptyCorpus, MalformedName, UnknownEmotionLetter, UnsupportedFormat,
            CorruptHeader) as exc:
        print(f"emocascade: I/O error: {exc}", file=sys.stderr)
        return EXIT_IO
    except AnalysisError as exc:
        stage = f" in {exc.stage} stage" if exc.stage else ""
        print(f"emocascade: analysis failed{stage}: {exc}", file=sys.stderr)
        return EXIT_IO
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
