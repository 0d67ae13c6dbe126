"""Bjontegaard delta calculus over fitted rate-distortion curves.

The rate delta integrates the difference of two log10(cost) fits over the
shared quality range and maps the average back through the exponential, so
the result is the mean relative cost change of the test codec against the
reference. The quality delta swaps the axes: it averages the quality
difference over the shared log10(cost) range and stays additive.
"""

from __future__ import annotations

from dataclasses import dataclass
from statistics import fmean

import numpy as np

from .errors import AxisNotInvertibleError, NoOverlapError
from .interpolators import make_interpolator, normalize_method
from .model import MetricPair, RDCurve

__all__ = [
    "OverlapBounds",
    "BDResult",
    "BDSummary",
    "log_transform",
    "overlap_bounds",
    "bd_rate",
    "bd_quality",
    "aggregate_bd",
]


def log_transform(costs) -> np.ndarray:
    """Map positive costs to log10; the calculus always integrates this axis."""
    values = np.asarray(costs, dtype=np.float64)
    if values.size and (not np.all(np.isfinite(values)) or np.any(values <= 0.0)):
        raise ValueError("costs must be positive and finite")
    return np.log10(values)


@dataclass(frozen=True)
class OverlapBounds:
    """Closed integration interval shared by both fitted curves."""

    low: float
    high: float

    def __post_init__(self):
        if not self.low < self.high:
            raise NoOverlapError(
                f"empty overlap interval [{self.low!r}, {self.high!r}]"
            )

    @property
    def width(self) -> float:
        return self.high - self.low


@dataclass(frozen=True)
class BDResult:
    """One delta between a test codec and a reference on one sequence.

    ``delta`` is a fraction for rate (-0.25 means 25 % average bitrate
    saving at equal quality) and an absolute quality difference for
    direction ``quality``.
    """

    delta: float
    direction: str
    method: str
    bounds: OverlapBounds
    codec_ref: str
    codec_test: str
    sequence_id: str
    metric_pair: MetricPair

    @property
    def delta_percent(self) -> float:
        return self.delta * 100.0


@dataclass(frozen=True)
class BDSummary:
    """Aggregate of per-sequence deltas for one codec pair and method."""

    results: tuple[BDResult, ...]
    mean: float
    min: float
    max: float

    @property
    def direction(self) -> str:
        return self.results[0].direction

    @property
    def method(self) -> str:
        return self.results[0].method

    @property
    def codec_ref(self) -> str:
        return self.results[0].codec_ref

    @property
    def codec_test(self) -> str:
        return self.results[0].codec_test


def _check_comparable(curve_ref: RDCurve, curve_test: RDCurve) -> None:
    if curve_ref.sequence_id != curve_test.sequence_id:
        raise ValueError(
            "curves compare different sequences: "
            f"{curve_ref.sequence_id!r} vs {curve_test.sequence_id!r}"
        )
    if curve_ref.metric_pair != curve_test.metric_pair:
        raise ValueError(
            "curves compare different metric pairs: "
            f"{curve_ref.metric_pair} vs {curve_test.metric_pair}"
        )


def overlap_bounds(curve_ref: RDCurve, curve_test: RDCurve) -> OverlapBounds:
    """Shared quality interval; raises NoOverlapError naming the sequence."""
    _check_comparable(curve_ref, curve_test)
    low = max(curve_ref.quality_min, curve_test.quality_min)
    high = min(curve_ref.quality_max, curve_test.quality_max)
    if not low < high:
        raise NoOverlapError(
            f"sequence {curve_ref.sequence_id!r}: quality ranges of "
            f"{curve_ref.codec_id!r} and {curve_test.codec_id!r} do not overlap"
        )
    return OverlapBounds(low, high)


def _fit(x, y, method: str):
    estimator = make_interpolator(method)
    return estimator.fit(x, y)


def bd_rate(
    curve_ref: RDCurve, curve_test: RDCurve, method: str = "akima"
) -> BDResult:
    """Average relative cost difference of the test codec at equal quality.

    Both curves are fitted as quality -> log10(cost); the mean ordinate gap
    over the overlap is turned back into a relative factor, so -0.3 reads as
    "the test codec needs 30 % less cost for the same quality".
    """
    method = normalize_method(method)
    bounds = overlap_bounds(curve_ref, curve_test)
    fit_ref = _fit(curve_ref.qualities, log_transform(curve_ref.costs), method)
    fit_test = _fit(curve_test.qualities, log_transform(curve_test.costs), method)
    integral_ref = fit_ref.integrate(bounds.low, bounds.high)
    integral_test = fit_test.integrate(bounds.low, bounds.high)
    mean_gap = (integral_test - integral_ref) / bounds.width
    return BDResult(
        delta=float(10.0 ** mean_gap - 1.0),
        direction="rate",
        method=method,
        bounds=bounds,
        codec_ref=curve_ref.codec_id,
        codec_test=curve_test.codec_id,
        sequence_id=curve_ref.sequence_id,
        metric_pair=curve_ref.metric_pair,
    )


def _log_cost_axis(curve: RDCurve) -> np.ndarray:
    if not curve.cost_is_monotone:
        raise AxisNotInvertibleError(
            f"curve {curve.describe()}: cost is not strictly increasing, "
            "quality delta is undefined"
        )
    return log_transform(curve.costs)


def bd_quality(
    curve_ref: RDCurve, curve_test: RDCurve, method: str = "akima"
) -> BDResult:
    """Average quality difference of the test codec at equal cost.

    Fits quality as a function of log10(cost), which requires strictly
    increasing cost on both curves. The delta stays an absolute quality
    difference (e.g. dB for PSNR); no exponentiation is applied.
    """
    method = normalize_method(method)
    _check_comparable(curve_ref, curve_test)
    x_ref = _log_cost_axis(curve_ref)
    x_test = _log_cost_axis(curve_test)
    low = max(x_ref[0], x_test[0])
    high = min(x_ref[-1], x_test[-1])
    if not low < high:
        raise NoOverlapError(
            f"sequence {curve_ref.sequence_id!r}: cost ranges of "
            f"{curve_ref.codec_id!r} and {curve_test.codec_id!r} do not overlap"
        )
    bounds = OverlapBounds(float(low), float(high))
    fit_ref = _fit(x_ref, curve_ref.qualities, method)
    fit_test = _fit(x_test, curve_test.qualities, method)
    integral_ref = fit_ref.integrate(bounds.low, bounds.high)
    integral_test = fit_test.integrate(bounds.low, bounds.high)
    return BDResult(
        delta=float((integral_test - integral_ref) / bounds.width),
        direction="quality",
        method=method,
        bounds=bounds,
        codec_ref=curve_ref.codec_id,
        codec_test=curve_test.codec_id,
        sequence_id=curve_ref.sequence_id,
        metric_pair=curve_ref.metric_pair,
    )


def aggregate_bd(results) -> BDSummary:
    """Summarize per-sequence deltas; all results must share one comparison."""
    results = tuple(results)
    if not results:
        raise ValueError("cannot aggregate an empty result list")
    first = results[0]
    for r in results[1:]:
        same = (
            r.direction == first.direction
            and r.method == first.method
            and r.codec_ref == first.codec_ref
            and r.codec_test == first.codec_test
            and r.metric_pair == first.metric_pair
        )
        if not same:
            raise ValueError(
                "aggregation requires a single direction, method, metric pair "
                "and codec pair"
            )
    deltas = [r.delta for r in results]
    return BDSummary(
        results=results,
        mean=float(fmean(deltas)),
        min=float(min(deltas)),
        max=float(max(deltas)),
    )
