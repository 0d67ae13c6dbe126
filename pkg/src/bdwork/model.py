"""Domain types, validation, and measurement-file ingestion.

The measurement schema is one flat table, CSV or JSON, with the columns

    sequence,codec,label,quality_metric,quality,cost_metric,cost,support

Rows flagged ``support=1`` anchor the interpolation; every row (supporting
included) is a validation point for accuracy assessment. One file may mix
several (quality, cost) metric pairs; curves are keyed by
(codec, sequence, metric pair).
"""

from __future__ import annotations

import csv
import json
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Mapping

import numpy as np

from .errors import IngestError
from .interpolators import normalize_method, point_requirement

__all__ = [
    "MetricPair",
    "RDPoint",
    "RDCurve",
    "CurveKey",
    "ValidationVerdict",
    "Dataset",
    "validate_curve",
    "ingest_dataset",
    "dataset_rows",
    "write_dataset_csv",
    "write_dataset_json",
]

CSV_FIELDS = (
    "sequence",
    "codec",
    "label",
    "quality_metric",
    "quality",
    "cost_metric",
    "cost",
    "support",
)


@dataclass(frozen=True, order=True)
class MetricPair:
    """A (quality, cost) axis choice, e.g. PSNR vs bitrate_kbps.

    Identifiers carry their unit (``bitrate_kbps``, ``decoding_energy_J``);
    they must be non-empty and distinct.
    """

    quality_metric: str
    cost_metric: str

    def __post_init__(self):
        if not self.quality_metric or not self.cost_metric:
            raise ValueError("metric identifiers must be non-empty")
        if self.quality_metric == self.cost_metric:
            raise ValueError("quality and cost metrics must be distinct")

    def __str__(self) -> str:
        return f"{self.quality_metric}:{self.cost_metric}"


@dataclass(frozen=True)
class RDPoint:
    """One measured sample: a label (typically the QP), quality, and cost."""

    label: str
    quality: float
    cost: float


@dataclass(frozen=True)
class RDCurve:
    """Ordered supporting points for one (codec, sequence, metric pair)."""

    codec_id: str
    sequence_id: str
    metric_pair: MetricPair
    points: tuple[RDPoint, ...]

    @property
    def qualities(self) -> np.ndarray:
        return np.array([p.quality for p in self.points], dtype=np.float64)

    @property
    def costs(self) -> np.ndarray:
        return np.array([p.cost for p in self.points], dtype=np.float64)

    @property
    def quality_min(self) -> float:
        return self.points[0].quality

    @property
    def quality_max(self) -> float:
        return self.points[-1].quality

    @property
    def cost_is_monotone(self) -> bool:
        """True when cost strictly increases with quality (no warning case)."""
        costs = [p.cost for p in self.points]
        return all(b > a for a, b in zip(costs, costs[1:]))

    def describe(self) -> str:
        return f"{self.codec_id}/{self.sequence_id}/{self.metric_pair}"


CurveKey = tuple[str, str, MetricPair]


@dataclass(frozen=True)
class ValidationVerdict:
    """Outcome of curve validation: hard violations plus soft warnings."""

    violations: tuple[str, ...] = ()
    warnings: tuple[str, ...] = ()

    @property
    def ok(self) -> bool:
        return not self.violations


def validate_curve(curve: RDCurve, method: str | None = None) -> ValidationVerdict:
    """Check curve invariants, optionally against one backend's requirements.

    Returns a verdict rather than raising: violations cover point counts,
    quality ordering, and non-positive costs; non-monotone cost is only a
    warning because the calculus stays defined (VMAF or energy measurements
    can be locally non-monotone).
    """
    violations: list[str] = []
    warnings: list[str] = []
    n = len(curve.points)
    if n < 2:
        violations.append(f"requires at least 2 supporting points, got {n}")
    if method is not None:
        canonical = normalize_method(method)
        min_pts, exact_pts = point_requirement(canonical)
        if exact_pts is not None and n != exact_pts:
            violations.append(
                f"{canonical} requires exactly {exact_pts} supporting points, got {n}"
            )
        elif n < min_pts:
            violations.append(
                f"{canonical} requires at least {min_pts} supporting points, got {n}"
            )
    qualities = [p.quality for p in curve.points]
    if any(not math.isfinite(q) for q in qualities):
        violations.append("quality values must be finite")
    elif any(b <= a for a, b in zip(qualities, qualities[1:])):
        violations.append("quality not strictly increasing")
    costs = [p.cost for p in curve.points]
    if any(not math.isfinite(c) or c <= 0.0 for c in costs):
        violations.append("cost must be positive")
    elif not curve.cost_is_monotone:
        warnings.append("cost not monotone increasing across quality")
    return ValidationVerdict(tuple(violations), tuple(warnings))


def _pair_sort_key(key: CurveKey):
    codec, sequence, pair = key
    return (sequence, codec, pair.quality_metric, pair.cost_metric)


@dataclass(frozen=True)
class Dataset:
    """Supporting curves plus dense validation points for many curves.

    ``diagnostics`` records rows rejected during ingestion (e.g. validation
    points outside the supporting quality range); it does not take part in
    dataset equality.
    """

    supporting_curves: Mapping[CurveKey, RDCurve]
    validation_points: Mapping[CurveKey, tuple[RDPoint, ...]]
    diagnostics: tuple[str, ...] = field(default=(), compare=False)

    def __post_init__(self):
        if not self.supporting_curves:
            raise ValueError("dataset must contain at least one curve")
        for key, curve in self.supporting_curves.items():
            verdict = validate_curve(curve)
            if not verdict.ok:
                raise ValueError(
                    f"invalid supporting curve {curve.describe()}: "
                    + "; ".join(verdict.violations)
                )
            codec, sequence, pair = key
            if (codec, sequence, pair) != (
                curve.codec_id,
                curve.sequence_id,
                curve.metric_pair,
            ):
                raise ValueError(f"curve key {key} does not match curve contents")
        for key, points in self.validation_points.items():
            curve = self.supporting_curves.get(key)
            if curve is None:
                raise ValueError(f"validation points without supporting curve: {key}")
            for p in points:
                if not curve.quality_min <= p.quality <= curve.quality_max:
                    raise ValueError(
                        f"validation point {p.label!r} (quality {p.quality!r}) "
                        f"outside supporting range of {curve.describe()}"
                    )

    def curve_keys(self, metric_pair: MetricPair | None = None) -> list[CurveKey]:
        keys = [
            k
            for k in self.supporting_curves
            if metric_pair is None or k[2] == metric_pair
        ]
        return sorted(keys, key=_pair_sort_key)

    @property
    def codecs(self) -> tuple[str, ...]:
        return tuple(sorted({k[0] for k in self.supporting_curves}))

    @property
    def sequences(self) -> tuple[str, ...]:
        return tuple(sorted({k[1] for k in self.supporting_curves}))

    @property
    def metric_pairs(self) -> tuple[MetricPair, ...]:
        return tuple(sorted({k[2] for k in self.supporting_curves}))

    @property
    def n_codecs(self) -> int:
        return len(self.codecs)

    @property
    def n_sequences(self) -> int:
        return len(self.sequences)

    def curve(self, codec: str, sequence: str, pair: MetricPair) -> RDCurve:
        return self.supporting_curves[(codec, sequence, pair)]

    def validation(self, codec: str, sequence: str, pair: MetricPair):
        return self.validation_points.get((codec, sequence, pair), ())


@dataclass
class _Row:
    lineno: int
    sequence: str
    codec: str
    label: str
    quality_metric: str
    quality: float
    cost_metric: str
    cost: float
    support: bool


def _parse_row(raw: Mapping[str, object], lineno: int) -> _Row:
    def text(name: str) -> str:
        value = raw.get(name)
        if value is None or str(value).strip() == "":
            raise IngestError(f"line {lineno}: missing value for {name!r}")
        return str(value).strip()

    def number(name: str) -> float:
        token = text(name)
        try:
            value = float(token)
        except ValueError:
            raise IngestError(
                f"line {lineno}: {name} value {token!r} is not a number"
            ) from None
        if not math.isfinite(value):
            raise IngestError(f"line {lineno}: {name} must be finite")
        return value

    cost = number("cost")
    if cost <= 0.0:
        raise IngestError(f"line {lineno}: cost must be positive")
    support_token = text("support")
    if support_token not in ("0", "1"):
        raise IngestError(
            f"line {lineno}: support must be 0 or 1, got {support_token!r}"
        )
    return _Row(
        lineno=lineno,
        sequence=text("sequence"),
        codec=text("codec"),
        label=text("label"),
        quality_metric=text("quality_metric"),
        quality=number("quality"),
        cost_metric=text("cost_metric"),
        cost=cost,
        support=support_token == "1",
    )


def _read_csv_rows(path: Path) -> list[_Row]:
    rows: list[_Row] = []
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        try:
            header = [cell.strip() for cell in next(reader)]
        except StopIteration:
            raise IngestError(f"{path.name}: empty file, no header") from None
        if sorted(header) != sorted(CSV_FIELDS):
            raise IngestError(
                f"{path.name}: header must contain exactly the fields "
                f"{','.join(CSV_FIELDS)}"
            )
        for record in reader:
            if not record or all(cell.strip() == "" for cell in record):
                continue
            if len(record) != len(header):
                raise IngestError(
                    f"line {reader.line_num}: expected {len(header)} fields, "
                    f"got {len(record)}"
                )
            rows.append(_parse_row(dict(zip(header, record)), reader.line_num))
    return rows


def _read_json_rows(path: Path) -> list[_Row]:
    with open(path, encoding="utf-8") as fh:
        try:
            payload = json.load(fh)
        except json.JSONDecodeError as exc:
            raise IngestError(f"{path.name}: invalid JSON: {exc}") from exc
    if not isinstance(payload, list):
        raise IngestError(f"{path.name}: expected a JSON array of row objects")
    rows = []
    for index, item in enumerate(payload, start=1):
        if not isinstance(item, dict):
            raise IngestError(f"row {index}: expected an object")
        unknown = set(item) - set(CSV_FIELDS)
        if unknown:
            raise IngestError(f"row {index}: unknown fields {sorted(unknown)}")
        rows.append(_parse_row(item, index))
    return rows


def ingest_dataset(path) -> Dataset:
    """Load a measurement file (CSV, or JSON when the suffix is .json).

    Rows flagged ``support=1`` become supporting points; all rows become
    validation points. Curves are normalized to ascending quality. Validation
    points outside the supporting quality range are dropped with a diagnostic
    rather than kept for extrapolation.
    """
    path = Path(path)
    rows = _read_json_rows(path) if path.suffix.lower() == ".json" else _read_csv_rows(path)
    if not rows:
        raise IngestError(f"{path.name}: no data rows")

    seen: dict[tuple, int] = {}
    grouped: dict[CurveKey, list[_Row]] = {}
    for row in rows:
        pair = MetricPair(row.quality_metric, row.cost_metric)
        key: CurveKey = (row.codec, row.sequence, pair)
        dup_key = (row.codec, row.sequence, pair, row.label)
        if dup_key in seen:
            raise IngestError(
                f"line {row.lineno}: duplicate row for codec {row.codec!r}, "
                f"sequence {row.sequence!r}, label {row.label!r} "
                f"(first seen at line {seen[dup_key]})"
            )
        seen[dup_key] = row.lineno
        grouped.setdefault(key, []).append(row)

    supporting: dict[CurveKey, RDCurve] = {}
    validation: dict[CurveKey, tuple[RDPoint, ...]] = {}
    diagnostics: list[str] = []
    for key in sorted(grouped, key=_pair_sort_key):
        codec, sequence, pair = key
        members = grouped[key]
        support_rows = sorted(
            (r for r in members if r.support), key=lambda r: (r.quality, r.label)
        )
        name = f"{codec}/{sequence}/{pair}"
        if len(support_rows) < 2:
            raise IngestError(
                f"curve {name}: needs at least 2 supporting rows, "
                f"got {len(support_rows)}"
            )
        for a, b in zip(support_rows, support_rows[1:]):
            if b.quality <= a.quality:
                raise IngestError(
                    f"curve {name}: supporting quality not strictly increasing "
                    f"(lines {a.lineno} and {b.lineno})"
                )
        curve = RDCurve(
            codec_id=codec,
            sequence_id=sequence,
            metric_pair=pair,
            points=tuple(
                RDPoint(r.label, r.quality, r.cost) for r in support_rows
            ),
        )
        lo, hi = curve.quality_min, curve.quality_max
        kept: list[RDPoint] = []
        for r in sorted(members, key=lambda r: (r.quality, r.label)):
            if lo <= r.quality <= hi:
                kept.append(RDPoint(r.label, r.quality, r.cost))
            else:
                diagnostics.append(
                    f"curve {name}: rejected validation point "
                    f"label={r.label!r} quality={r.quality!r} "
                    f"outside supporting range [{lo!r}, {hi!r}] (line {r.lineno})"
                )
        supporting[key] = curve
        validation[key] = tuple(kept)
    return Dataset(supporting, validation, tuple(diagnostics))


def dataset_rows(dataset: Dataset) -> list[dict]:
    """Flatten a dataset back into schema rows in canonical order."""
    rows: list[dict] = []
    for key in dataset.curve_keys():
        codec, sequence, pair = key
        curve = dataset.supporting_curves[key]
        support_set = {(p.label, p.quality, p.cost) for p in curve.points}
        emitted = set()
        for p in dataset.validation_points.get(key, ()):
            identity = (p.label, p.quality, p.cost)
            emitted.add(identity)
            rows.append(
                {
                    "sequence": sequence,
                    "codec": codec,
                    "label": p.label,
                    "quality_metric": pair.quality_metric,
                    "quality": p.quality,
                    "cost_metric": pair.cost_metric,
                    "cost": p.cost,
                    "support": 1 if identity in support_set else 0,
                }
            )
        # Supporting points normally double as validation points; keep any
        # that do not so serialization never loses a curve.
        for p in curve.points:
            if (p.label, p.quality, p.cost) not in emitted:
                rows.append(
                    {
                        "sequence": sequence,
                        "codec": codec,
                        "label": p.label,
                        "quality_metric": pair.quality_metric,
                        "quality": p.quality,
                        "cost_metric": pair.cost_metric,
                        "cost": p.cost,
                        "support": 1,
                    }
                )
    return rows


def write_dataset_csv(dataset: Dataset, path) -> None:
    """Serialize with full float precision so ingest round-trips bit-exactly."""
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(CSV_FIELDS)
        for row in dataset_rows(dataset):
            writer.writerow(
                [
                    row["sequence"],
                    row["codec"],
                    row["label"],
                    row["quality_metric"],
                    repr(row["quality"]),
                    row["cost_metric"],
                    repr(row["cost"]),
                    row["support"],
                ]
            )


def write_dataset_json(dataset: Dataset, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(dataset_rows(dataset), fh, indent=2)
        fh.write("\n")


def curves_from_arrays(
    codec: str,
    sequence: str,
    pair: MetricPair,
    labels: Iterable[str],
    qualities: Iterable[float],
    costs: Iterable[float],
) -> RDCurve:
    """Convenience constructor for building a curve from parallel arrays."""
    points = tuple(
        RDPoint(str(l), float(q), float(c))
        for l, q, c in zip(labels, qualities, costs)
    )
    return RDCurve(codec, sequence, pair, points)
