"""Interpolation accuracy against dense validation measurements.

Every backend is judged by how well the curve fitted on the sparse
supporting points reproduces the measured cost at each validation quality.
Errors are relative and taken in the linear cost domain, so a value of
0.015 means the interpolated bitrate (or energy, ...) is off by 1.5 %.
"""

from __future__ import annotations

import csv
import json
from dataclasses import dataclass

from .errors import CurveValidationError
from .interpolators import (
    METHOD_NAMES,
    make_interpolator,
    normalize_method,
)
from .model import Dataset, MetricPair, validate_curve
from .bd import log_transform

__all__ = [
    "PointError",
    "AccuracyReport",
    "MethodComparison",
    "assess",
    "compare_methods",
    "write_accuracy_csv",
    "write_accuracy_json",
    "write_point_errors_csv",
]


@dataclass(frozen=True)
class PointError:
    """Relative cost error of one validation point under one backend."""

    codec_id: str
    sequence_id: str
    label: str
    actual_cost: float
    interpolated_cost: float
    relative_error: float


@dataclass(frozen=True)
class AccuracyReport:
    """Pooled accuracy of one backend over a dataset.

    ``e_bar`` is the grand mean of all per-point relative errors and
    ``e_max`` their maximum, both fractions in the linear cost domain.
    """

    method: str
    metric_pair: MetricPair
    point_errors: tuple[PointError, ...]
    e_bar: float
    e_max: float
    n_codecs: int
    n_sequences: int

    @property
    def n_points(self) -> int:
        return len(self.point_errors)

    @property
    def worst_point(self) -> PointError:
        return max(self.point_errors, key=lambda p: p.relative_error)


@dataclass(frozen=True)
class MethodComparison:
    """Reports ranked best-first plus notices for skipped backends."""

    reports: tuple[AccuracyReport, ...]
    notices: tuple[str, ...] = ()


def _resolve_pair(dataset: Dataset, metric_pair: MetricPair | None) -> MetricPair:
    pairs = dataset.metric_pairs
    if metric_pair is not None:
        if metric_pair not in pairs:
            raise ValueError(f"dataset has no curves for metric pair {metric_pair}")
        return metric_pair
    if len(pairs) != 1:
        raise ValueError(
            "dataset holds several metric pairs; pass metric_pair explicitly: "
            + ", ".join(str(p) for p in pairs)
        )
    return pairs[0]


def assess(
    dataset: Dataset,
    method: str = "akima",
    metric_pair: MetricPair | None = None,
) -> AccuracyReport:
    """Fit each curve on its supporting points and score every validation point.

    The fit maps quality to log10(cost); the error of a point is
    ``|10**fit(quality) - cost| / cost``. Raises CurveValidationError when a
    curve does not meet the backend's point count requirements.
    """
    method = normalize_method(method)
    pair = _resolve_pair(dataset, metric_pair)
    errors: list[PointError] = []
    codecs: set[str] = set()
    sequences: set[str] = set()
    for key in dataset.curve_keys(pair):
        curve = dataset.supporting_curves[key]
        verdict = validate_curve(curve, method)
        if not verdict.ok:
            raise CurveValidationError(
                f"curve {curve.describe()}: " + "; ".join(verdict.violations)
            )
        fit = make_interpolator(method).fit(
            curve.qualities, log_transform(curve.costs)
        )
        codecs.add(curve.codec_id)
        sequences.add(curve.sequence_id)
        for point in dataset.validation_points.get(key, ()):
            interpolated = float(10.0 ** fit.predict(point.quality))
            errors.append(
                PointError(
                    codec_id=curve.codec_id,
                    sequence_id=curve.sequence_id,
                    label=point.label,
                    actual_cost=point.cost,
                    interpolated_cost=interpolated,
                    relative_error=abs(interpolated - point.cost) / point.cost,
                )
            )
    if not errors:
        raise ValueError(f"no validation points for metric pair {pair}")
    magnitudes = [e.relative_error for e in errors]
    return AccuracyReport(
        method=method,
        metric_pair=pair,
        point_errors=tuple(errors),
        e_bar=float(sum(magnitudes) / len(magnitudes)),
        e_max=float(max(magnitudes)),
        n_codecs=len(codecs),
        n_sequences=len(sequences),
    )


def compare_methods(
    dataset: Dataset,
    methods=None,
    metric_pair: MetricPair | None = None,
) -> MethodComparison:
    """Assess several backends on one dataset and rank them best-first.

    Backends whose point count requirements fail on some curve are skipped
    with a notice instead of aborting the comparison. Reports are sorted by
    mean error, then max error, then name.
    """
    names = METHOD_NAMES if methods is None else tuple(methods)
    pair = _resolve_pair(dataset, metric_pair)
    reports: list[AccuracyReport] = []
    notices: list[str] = []
    for raw_name in names:
        method = normalize_method(raw_name)
        try:
            reports.append(assess(dataset, method, pair))
        except CurveValidationError as exc:
            notices.append(f"skipped {method}: {exc}")
    reports.sort(key=lambda r: (r.e_bar, r.e_max, r.method))
    return MethodComparison(tuple(reports), tuple(notices))


def write_accuracy_csv(reports, path) -> None:
    """Tabulate reports with errors as percentages rounded to 3 decimals."""
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["method", "metric_pair", "e_bar", "e_max", "n_points"])
        for report in reports:
            writer.writerow(
                [
                    report.method,
                    str(report.metric_pair),
                    f"{report.e_bar * 100.0:.3f}",
                    f"{report.e_max * 100.0:.3f}",
                    report.n_points,
                ]
            )


def write_accuracy_json(reports, path) -> None:
    """Full precision mirror of the CSV table, errors as raw fractions."""
    payload = [
        {
            "method": report.method,
            "metric_pair": str(report.metric_pair),
            "e_bar": report.e_bar,
            "e_max": report.e_max,
            "n_points": report.n_points,
            "n_codecs": report.n_codecs,
            "n_sequences": report.n_sequences,
        }
        for report in reports
    ]
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(payload, fh, indent=2)
        fh.write("\n")


def write_point_errors_csv(report: AccuracyReport, path) -> None:
    """Per-point detail table behind one report, full float precision."""
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(
            [
                "codec",
                "sequence",
                "label",
                "actual_cost",
                "interpolated_cost",
                "relative_error",
            ]
        )
        for p in report.point_errors:
            writer.writerow(
                [
                    p.codec_id,
                    p.sequence_id,
                    p.label,
                    repr(p.actual_cost),
                    repr(p.interpolated_cost),
                    repr(p.relative_error),
                ]
            )
