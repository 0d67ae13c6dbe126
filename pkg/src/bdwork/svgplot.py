"""Self-contained SVG plots of measured points and fitted curves.

One plot shows a single sequence and metric pair: cost on x, quality on y,
measured validation points as circles, supporting points as crosses, and
one sampled polyline per codec for the chosen backend. With exactly two
codecs the shared cost range is marked by two dashed vertical lines. The
output embeds all styling inline and references no external assets.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass

import numpy as np

from .bd import log_transform
from .interpolators import make_interpolator, normalize_method
from .model import Dataset, MetricPair, RDPoint

__all__ = [
    "PlotSeries",
    "PlotData",
    "build_plot_data",
    "render_svg",
    "write_plot_csv",
]

_PALETTE = ("#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b")

_SAMPLES = 512


@dataclass(frozen=True)
class PlotSeries:
    """Sampled fitted curve for one codec."""

    codec_id: str
    method: str
    qualities: np.ndarray
    costs: np.ndarray


@dataclass(frozen=True)
class PlotData:
    """Everything needed to render or export one sequence plot."""

    sequence_id: str
    metric_pair: MetricPair
    method: str
    series: tuple[PlotSeries, ...]
    supporting: tuple[tuple[str, RDPoint], ...]
    validation: tuple[tuple[str, RDPoint], ...]
    cost_bounds: tuple[float, float] | None


def build_plot_data(
    dataset: Dataset,
    sequence: str,
    metric_pair: MetricPair | None = None,
    method: str = "akima",
    samples: int = _SAMPLES,
) -> PlotData:
    """Fit every codec of one sequence and sample the curves densely.

    Sampling runs over ``samples`` uniform quality abscissae per codec;
    costs come from mapping the fitted log10(cost) back to linear.
    """
    method = normalize_method(method)
    pairs = dataset.metric_pairs if metric_pair is None else (metric_pair,)
    if len(pairs) != 1:
        raise ValueError(
            "dataset holds several metric pairs; pass metric_pair explicitly"
        )
    pair = pairs[0]
    keys = [k for k in dataset.curve_keys(pair) if k[1] == sequence]
    if not keys:
        raise ValueError(f"no curves for sequence {sequence!r} and pair {pair}")
    series = []
    supporting = []
    validation = []
    for key in keys:
        curve = dataset.supporting_curves[key]
        fit = make_interpolator(method).fit(
            curve.qualities, log_transform(curve.costs)
        )
        grid = np.linspace(curve.quality_min, curve.quality_max, samples)
        series.append(
            PlotSeries(
                codec_id=curve.codec_id,
                method=method,
                qualities=grid,
                costs=10.0 ** fit.predict(grid),
            )
        )
        supporting.extend((curve.codec_id, p) for p in curve.points)
        validation.extend(
            (curve.codec_id, p) for p in dataset.validation_points.get(key, ())
        )
    bounds = None
    if len(keys) == 2:
        curves = [dataset.supporting_curves[k] for k in keys]
        low = max(min(c.costs) for c in curves)
        high = min(max(c.costs) for c in curves)
        if low < high:
            bounds = (float(low), float(high))
    return PlotData(
        sequence_id=sequence,
        metric_pair=pair,
        method=method,
        series=tuple(series),
        supporting=tuple(supporting),
        validation=tuple(validation),
        cost_bounds=bounds,
    )


def _nice_ticks(lo: float, hi: float, target: int = 6) -> list[float]:
    """Round tick positions at a 1/2/5 step covering [lo, hi]."""
    if not lo < hi:
        return [lo]
    raw = (hi - lo) / max(target, 2)
    mag = 10.0 ** math.floor(math.log10(raw))
    for mult in (1.0, 2.0, 5.0, 10.0):
        step = mult * mag
        if step >= raw:
            break
    first = math.ceil(lo / step) * step
    ticks = []
    value = first
    while value <= hi + step * 1e-9:
        ticks.append(round(value / step) * step)
        value += step
    return ticks


def _log_ticks(lo: float, hi: float) -> list[float]:
    """Decade ticks; denser 1/2/5 grid when the span is under two decades."""
    lo_e = math.ceil(math.log10(lo) - 1e-12)
    hi_e = math.floor(math.log10(hi) + 1e-12)
    decades = [10.0 ** e for e in range(lo_e, hi_e + 1)]
    if len(decades) >= 2:
        return decades
    ticks = [
        m * 10.0 ** e
        for e in range(lo_e - 1, hi_e + 2)
        for m in (1.0, 2.0, 5.0)
    ]
    return [t for t in ticks if lo <= t <= hi] or [lo, hi]


def _fmt(value: float) -> str:
    return f"{value:g}"


def _esc(text: str) -> str:
    return (
        str(text)
        .replace("&", "&amp;")
        .replace("<", "&lt;")
        .replace(">", "&gt;")
        .replace('"', "&quot;")
    )


class _Canvas:
    """Tiny SVG writer; coordinates are emitted with fixed precision."""

    def __init__(self, width: int, height: int):
        self.width = width
        self.height = height
        self.parts: list[str] = []

    def add(self, element: str) -> None:
        self.parts.append(element)

    def line(self, x1, y1, x2, y2, style: str) -> None:
        self.add(
            f'<line x1="{x1:.2f}" y1="{y1:.2f}" x2="{x2:.2f}" y2="{y2:.2f}" '
            f'style="{style}"/>'
        )

    def text(self, x, y, content, style: str, anchor: str = "middle") -> None:
        self.add(
            f'<text x="{x:.2f}" y="{y:.2f}" text-anchor="{anchor}" '
            f'style="{style}">{_esc(content)}</text>'
        )

    def render(self) -> str:
        body = "\n".join(self.parts)
        return (
            f'<svg xmlns="http://www.w3.org/2000/svg" width="{self.width}" '
            f'height="{self.height}" viewBox="0 0 {self.width} {self.height}">\n'
            f'<rect width="{self.width}" height="{self.height}" fill="#ffffff"/>\n'
            f"{body}\n</svg>\n"
        )


_TEXT = "font-family:sans-serif;font-size:12px;fill:#333333"
_TITLE = "font-family:sans-serif;font-size:14px;fill:#111111"
_AXIS = "stroke:#333333;stroke-width:1"
_GRID = "stroke:#dddddd;stroke-width:0.5"
_BOUND = "stroke:#555555;stroke-width:1;stroke-dasharray:6 4"


def render_svg(data: PlotData, log_x: bool = False) -> str:
    """Render one plot to an SVG string; log_x switches to decade ticks."""
    width, height = 960, 600
    left, right, top, bottom = 75.0, 225.0, 50.0, 65.0
    plot_w = width - left - right
    plot_h = height - top - bottom

    costs = np.concatenate([s.costs for s in data.series])
    costs = np.concatenate(
        [costs, [p.cost for _, p in data.supporting + data.validation]]
    )
    quals = np.concatenate([s.qualities for s in data.series])
    quals = np.concatenate(
        [quals, [p.quality for _, p in data.supporting + data.validation]]
    )
    x_lo, x_hi = float(costs.min()), float(costs.max())
    y_lo, y_hi = float(quals.min()), float(quals.max())
    if log_x:
        x_lo_t, x_hi_t = math.log10(x_lo), math.log10(x_hi)
    else:
        x_lo_t, x_hi_t = x_lo, x_hi
    x_pad = (x_hi_t - x_lo_t) * 0.04 or 1.0
    y_pad = (y_hi - y_lo) * 0.06 or 1.0
    x_lo_t -= x_pad
    x_hi_t += x_pad
    y_lo -= y_pad
    y_hi += y_pad

    def sx(cost: float) -> float:
        t = math.log10(cost) if log_x else cost
        return left + (t - x_lo_t) / (x_hi_t - x_lo_t) * plot_w

    def sy(quality: float) -> float:
        return top + (y_hi - quality) / (y_hi - y_lo) * plot_h

    svg = _Canvas(width, height)
    svg.text(
        left + plot_w / 2.0,
        top - 18.0,
        f"{data.sequence_id} ({data.method})",
        _TITLE,
    )

    if log_x:
        x_ticks = _log_ticks(10.0 ** x_lo_t, 10.0 ** x_hi_t)
    else:
        x_ticks = _nice_ticks(x_lo_t, x_hi_t)
    for tick in x_ticks:
        x = sx(tick) if log_x else left + (tick - x_lo_t) / (x_hi_t - x_lo_t) * plot_w
        svg.line(x, top, x, top + plot_h, _GRID)
        svg.line(x, top + plot_h, x, top + plot_h + 4.0, _AXIS)
        svg.text(x, top + plot_h + 18.0, _fmt(tick), _TEXT)
    for tick in _nice_ticks(y_lo, y_hi):
        y = sy(tick)
        svg.line(left, y, left + plot_w, y, _GRID)
        svg.line(left - 4.0, y, left, y, _AXIS)
        svg.text(left - 8.0, y + 4.0, _fmt(tick), _TEXT, anchor="end")

    if data.cost_bounds is not None:
        svg.add('<g class="bounds">')
        for bound in data.cost_bounds:
            x = sx(bound)
            svg.line(x, top, x, top + plot_h, _BOUND)
        svg.add("</g>")

    svg.line(left, top + plot_h, left + plot_w, top + plot_h, _AXIS)
    svg.line(left, top, left, top + plot_h, _AXIS)
    svg.text(
        left + plot_w / 2.0,
        height - 18.0,
        data.metric_pair.cost_metric,
        _TEXT,
    )
    svg.add(
        f'<text x="22" y="{top + plot_h / 2.0:.2f}" text-anchor="middle" '
        f'style="{_TEXT}" transform="rotate(-90 22 {top + plot_h / 2.0:.2f})">'
        f"{_esc(data.metric_pair.quality_metric)}</text>"
    )

    color_of = {
        s.codec_id: _PALETTE[i % len(_PALETTE)] for i, s in enumerate(data.series)
    }
    svg.add('<g class="series">')
    for s in data.series:
        points = " ".join(
            f"{sx(c):.2f},{sy(q):.2f}" for q, c in zip(s.qualities, s.costs)
        )
        svg.add(
            f'<polyline points="{points}" style="fill:none;'
            f'stroke:{color_of[s.codec_id]};stroke-width:1.5"/>'
        )
    svg.add("</g>")
    svg.add('<g class="validation">')
    for codec, p in data.validation:
        svg.add(
            f'<circle cx="{sx(p.cost):.2f}" cy="{sy(p.quality):.2f}" r="2.5" '
            f'style="fill:none;stroke:{color_of.get(codec, "#333333")};'
            f'stroke-width:1"/>'
        )
    svg.add("</g>")
    svg.add('<g class="supporting">')
    for codec, p in data.supporting:
        x, y = sx(p.cost), sy(p.quality)
        color = color_of.get(codec, "#333333")
        svg.add(
            f'<path d="M{x - 4:.2f} {y - 4:.2f}L{x + 4:.2f} {y + 4:.2f}'
            f'M{x - 4:.2f} {y + 4:.2f}L{x + 4:.2f} {y - 4:.2f}" '
            f'style="stroke:{color};stroke-width:1.5"/>'
        )
    svg.add("</g>")

    svg.add('<g class="legend">')
    lx = left + plot_w + 20.0
    ly = top + 10.0
    for s in data.series:
        color = color_of[s.codec_id]
        svg.line(lx, ly - 4.0, lx + 24.0, ly - 4.0, f"stroke:{color};stroke-width:1.5")
        svg.text(lx + 30.0, ly, s.codec_id, _TEXT, anchor="start")
        ly += 20.0
    ly += 6.0
    svg.add(
        f'<path d="M{lx + 8:.2f} {ly - 8:.2f}L{lx + 16:.2f} {ly:.2f}'
        f'M{lx + 8:.2f} {ly:.2f}L{lx + 16:.2f} {ly - 8:.2f}" '
        f'style="stroke:#333333;stroke-width:1.5"/>'
    )
    svg.text(lx + 30.0, ly, "supporting point", _TEXT, anchor="start")
    ly += 20.0
    svg.add(
        f'<circle cx="{lx + 12:.2f}" cy="{ly - 4:.2f}" r="2.5" '
        f'style="fill:none;stroke:#333333;stroke-width:1"/>'
    )
    svg.text(lx + 30.0, ly, "measured point", _TEXT, anchor="start")
    if data.cost_bounds is not None:
        ly += 20.0
        svg.line(lx, ly - 4.0, lx + 24.0, ly - 4.0, _BOUND)
        svg.text(lx + 30.0, ly, "shared cost range", _TEXT, anchor="start")
    svg.add("</g>")
    return svg.render()


def write_plot_csv(data: PlotData, path) -> None:
    """Export the sampled polylines, one row per sample, full precision."""
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["codec", "method", "quality", "cost"])
        for s in data.series:
            for q, c in zip(s.qualities, s.costs):
                writer.writerow([s.codec_id, s.method, repr(float(q)), repr(float(c))])
