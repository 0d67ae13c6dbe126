"""Command-line front end: compute deltas, assess backends, emit plots.

Subcommands
    compute   BD deltas between a test codec and a reference, per sequence
    assess    interpolation accuracy of several backends on one dataset
    plot      SVG plot plus sampled-curve CSV per sequence

Exit codes: 0 success, 2 input or argument errors, 3 no-overlap or fit
failures (the message names the offending sequence). Output files are
deterministic: identical inputs and flags produce byte-identical bytes.
"""

from __future__ import annotations

import argparse
import json
import re
import sys
from dataclasses import dataclass, field
from pathlib import Path

from .assess import (
    compare_methods,
    write_accuracy_csv,
    write_accuracy_json,
    write_point_errors_csv,
)
from .bd import aggregate_bd, bd_quality, bd_rate
from .errors import (
    AxisNotInvertibleError,
    CurveValidationError,
    IngestError,
    NoOverlapError,
)
from .interpolators import DEFAULT_COMPARISON_METHODS, normalize_method
from .model import Dataset, MetricPair, ingest_dataset
from .svgplot import build_plot_data, render_svg, write_plot_csv

__all__ = ["RunConfig", "main", "entrypoint"]

EXIT_OK = 0
EXIT_INPUT = 2
EXIT_COMPUTE = 3


@dataclass
class RunConfig:
    """Resolved invocation: one subcommand plus everything it needs."""

    command: str
    input: Path
    out_dir: Path
    method: str = "akima"
    methods: tuple[str, ...] = DEFAULT_COMPARISON_METHODS
    codec_ref: str = ""
    codec_test: str = ""
    metric_pair: MetricPair | None = None
    direction: str = "rate"
    log_x: bool = False
    per_point: bool = False
    formats: tuple[str, ...] = field(default=("csv", "json", "svg"))

    def __post_init__(self):
        if self.command == "compute" and self.codec_ref == self.codec_test:
            raise ValueError("reference and test codec must differ")


def _parse_pair(text: str) -> MetricPair:
    quality, sep, cost = text.partition(":")
    if not sep or not quality or not cost:
        raise ValueError(f"metric pair must look like QUALITY:COST, got {text!r}")
    return MetricPair(quality, cost)


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="bdwork",
        description="Bjontegaard delta workbench for arbitrary quality/cost metrics",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    compute = sub.add_parser(
        "compute", help="BD delta of a test codec against a reference"
    )
    compute.add_argument("--input", required=True, help="measurement CSV or JSON")
    compute.add_argument("--ref", required=True, help="reference codec id")
    compute.add_argument("--test", required=True, help="test codec id")
    compute.add_argument("--method", default="akima", help="interpolation backend")
    compute.add_argument(
        "--pair",
        default=None,
        help="metric pair QUALITY:COST (defaults to the file's only pair)",
    )
    compute.add_argument(
        "--direction",
        choices=("rate", "quality"),
        default="rate",
        help="rate: cost delta at equal quality; quality: the vertical variant",
    )
    compute.add_argument("--out", required=True, help="output directory")

    assess = sub.add_parser("assess", help="interpolation accuracy per backend")
    assess.add_argument("--input", required=True, help="measurement CSV or JSON")
    assess.add_argument(
        "--methods",
        default=",".join(DEFAULT_COMPARISON_METHODS),
        help="comma-separated backend list",
    )
    assess.add_argument("--pair", default=None, help="metric pair QUALITY:COST")
    assess.add_argument(
        "--per-point",
        action="store_true",
        help="also write one per-point error table per backend",
    )
    assess.add_argument("--out", required=True, help="output directory")

    plot = sub.add_parser("plot", help="SVG plot and sampled curve CSV")
    plot.add_argument("--input", required=True, help="measurement CSV or JSON")
    plot.add_argument("--method", default="akima", help="interpolation backend")
    plot.add_argument("--pair", default=None, help="metric pair QUALITY:COST")
    plot.add_argument(
        "--log-x", action="store_true", help="logarithmic cost axis with decade ticks"
    )
    plot.add_argument("--out", required=True, help="output directory")
    return parser


def _config_from_args(args: argparse.Namespace) -> RunConfig:
    pair = _parse_pair(args.pair) if getattr(args, "pair", None) else None
    extra = {}
    if args.command == "compute":
        extra = {
            "method": normalize_method(args.method),
            "codec_ref": args.ref,
            "codec_test": args.test,
            "direction": args.direction,
        }
    elif args.command == "assess":
        names = [token.strip() for token in args.methods.split(",") if token.strip()]
        if not names:
            raise ValueError("--methods must name at least one backend")
        extra = {
            "methods": tuple(normalize_method(n) for n in names),
            "per_point": args.per_point,
        }
    elif args.command == "plot":
        extra = {"method": normalize_method(args.method), "log_x": args.log_x}
    return RunConfig(
        command=args.command,
        input=Path(args.input),
        out_dir=Path(args.out),
        metric_pair=pair,
        **extra,
    )


def _resolve_pair(dataset: Dataset, config: RunConfig) -> MetricPair:
    if config.metric_pair is not None:
        if config.metric_pair not in dataset.metric_pairs:
            raise ValueError(
                f"input has no curves for metric pair {config.metric_pair}"
            )
        return config.metric_pair
    pairs = dataset.metric_pairs
    if len(pairs) != 1:
        raise ValueError(
            "input holds several metric pairs; pass --pair QUALITY:COST "
            "(available: " + ", ".join(str(p) for p in pairs) + ")"
        )
    return pairs[0]


def _slug(text: str) -> str:
    return re.sub(r"[^A-Za-z0-9._-]+", "_", text)


def _cmd_compute(config: RunConfig) -> int:
    dataset = ingest_dataset(config.input)
    pair = _resolve_pair(dataset, config)
    for codec in (config.codec_ref, config.codec_test):
        if codec not in dataset.codecs:
            raise ValueError(f"codec {codec!r} not present in input")
    shared = [
        seq
        for seq in dataset.sequences
        if (config.codec_ref, seq, pair) in dataset.supporting_curves
        and (config.codec_test, seq, pair) in dataset.supporting_curves
    ]
    if not shared:
        raise ValueError(
            f"no sequence carries curves for both {config.codec_ref!r} "
            f"and {config.codec_test!r} on pair {pair}"
        )
    delta_of = bd_rate if config.direction == "rate" else bd_quality
    results = []
    for sequence in shared:
        ref = dataset.curve(config.codec_ref, sequence, pair)
        test = dataset.curve(config.codec_test, sequence, pair)
        results.append(delta_of(ref, test, config.method))
    summary = aggregate_bd(results)

    config.out_dir.mkdir(parents=True, exist_ok=True)
    csv_path = config.out_dir / "bd_results.csv"
    json_path = config.out_dir / "bd_results.json"

    def fmt(delta: float) -> str:
        if config.direction == "rate":
            return f"{delta * 100.0:.2f}%"
        return f"{delta:.2f}"

    lines = ["sequence,codec_ref,codec_test,direction,method,low,high,delta"]
    for r in results:
        lines.append(
            f"{r.sequence_id},{r.codec_ref},{r.codec_test},{r.direction},"
            f"{r.method},{r.bounds.low!r},{r.bounds.high!r},{fmt(r.delta)}"
        )
    lines.append(
        f"MEAN,{summary.codec_ref},{summary.codec_test},{summary.direction},"
        f"{summary.method},,,{fmt(summary.mean)}"
    )
    csv_path.write_text("\n".join(lines) + "\n", encoding="utf-8")

    payload = {
        "direction": summary.direction,
        "method": summary.method,
        "codec_ref": summary.codec_ref,
        "codec_test": summary.codec_test,
        "metric_pair": str(pair),
        "results": [
            {
                "sequence": r.sequence_id,
                "delta": r.delta,
                "low": r.bounds.low,
                "high": r.bounds.high,
            }
            for r in results
        ],
        "summary": {"mean": summary.mean, "min": summary.min, "max": summary.max},
    }
    with open(json_path, "w", encoding="utf-8") as fh:
        json.dump(payload, fh, indent=2)
        fh.write("\n")

    for line in dataset.diagnostics:
        print(f"note: {line}", file=sys.stderr)
    label = "BD-rate" if config.direction == "rate" else "BD-quality"
    print(
        f"{label} ({summary.method}) {config.codec_test} vs {config.codec_ref}: "
        f"mean {fmt(summary.mean)} over {len(results)} sequence(s)"
    )
    print(f"wrote {csv_path} and {json_path}")
    return EXIT_OK


def _cmd_assess(config: RunConfig) -> int:
    dataset = ingest_dataset(config.input)
    pair = _resolve_pair(dataset, config)
    comparison = compare_methods(dataset, config.methods, pair)
    if not comparison.reports:
        raise CurveValidationError(
            "no backend is applicable: " + "; ".join(comparison.notices)
        )
    config.out_dir.mkdir(parents=True, exist_ok=True)
    csv_path = config.out_dir / "accuracy.csv"
    json_path = config.out_dir / "accuracy.json"
    write_accuracy_csv(comparison.reports, csv_path)
    write_accuracy_json(comparison.reports, json_path)
    written = [csv_path, json_path]
    if config.per_point:
        for report in comparison.reports:
            detail = config.out_dir / f"point_errors_{report.method}.csv"
            write_point_errors_csv(report, detail)
            written.append(detail)
    for line in dataset.diagnostics + comparison.notices:
        print(f"note: {line}", file=sys.stderr)
    best = comparison.reports[0]
    print(
        f"best backend: {best.method} "
        f"(mean error {best.e_bar * 100.0:.3f}%, max {best.e_max * 100.0:.3f}%)"
    )
    print("wrote " + ", ".join(str(p) for p in written))
    return EXIT_OK


def _cmd_plot(config: RunConfig) -> int:
    dataset = ingest_dataset(config.input)
    pair = _resolve_pair(dataset, config)
    config.out_dir.mkdir(parents=True, exist_ok=True)
    written = []
    for sequence in dataset.sequences:
        if not any(k[1] == sequence for k in dataset.curve_keys(pair)):
            continue
        data = build_plot_data(dataset, sequence, pair, config.method)
        stem = _slug(f"plot_{sequence}_{pair.quality_metric}_{pair.cost_metric}")
        svg_path = config.out_dir / f"{stem}.svg"
        csv_path = config.out_dir / f"{stem}.csv"
        svg_path.write_text(render_svg(data, log_x=config.log_x), encoding="utf-8")
        write_plot_csv(data, csv_path)
        written.extend([svg_path, csv_path])
    for line in dataset.diagnostics:
        print(f"note: {line}", file=sys.stderr)
    print("wrote " + ", ".join(str(p) for p in written))
    return EXIT_OK


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INPUT if exc.code not in (0, None) else EXIT_OK
    try:
        config = _config_from_args(args)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    runner = {"compute": _cmd_compute, "assess": _cmd_assess, "plot": _cmd_plot}[
        config.command
    ]
    try:
        return runner(config)
    except (IngestError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except (NoOverlapError, AxisNotInvertibleError, CurveValidationError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_COMPUTE


def entrypoint() -> None:
    sys.exit(main())


if __name__ == "__main__":
    entrypoint()
