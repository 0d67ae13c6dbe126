"""Bjontegaard delta workbench for arbitrary quality/cost metric pairs.

The package fits rate-distortion curves with selectable piecewise-cubic
backends, computes BD-rate and BD-quality deltas between codecs, scores
each backend's interpolation accuracy against dense validation
measurements, and renders self-contained SVG plots. The ``bdwork`` console
script fronts the same functionality.
"""

from __future__ import annotations

from .assess import (
    AccuracyReport,
    MethodComparison,
    PointError,
    assess,
    compare_methods,
)
from .bd import (
    BDResult,
    BDSummary,
    OverlapBounds,
    aggregate_bd,
    bd_quality,
    bd_rate,
    log_transform,
    overlap_bounds,
)
from .errors import (
    AxisNotInvertibleError,
    BdworkError,
    CurveValidationError,
    IngestError,
    NoOverlapError,
    OutOfDomainError,
)
from .interpolators import (
    DEFAULT_COMPARISON_METHODS,
    METHOD_NAMES,
    AkimaInterpolator,
    CubicSplineInterpolator,
    PchipInterpolator,
    SingleCubicInterpolator,
    make_interpolator,
    normalize_method,
    point_requirement,
)
from .model import (
    Dataset,
    MetricPair,
    RDCurve,
    RDPoint,
    ValidationVerdict,
    curves_from_arrays,
    ingest_dataset,
    validate_curve,
    write_dataset_csv,
    write_dataset_json,
)
from .piecewise import PiecewiseCubic
from .svgplot import PlotData, PlotSeries, build_plot_data, render_svg

__version__ = "0.1.0"


def fit_single_cubic(x, y) -> PiecewiseCubic:
    """Fit one global cubic through exactly four points."""
    return SingleCubicInterpolator().fit(x, y).curve_


def fit_csi(x, y, boundary: str = "not_a_knot") -> PiecewiseCubic:
    """Fit a C2 cubic spline with the given boundary condition."""
    return CubicSplineInterpolator(boundary=boundary).fit(x, y).curve_


def fit_pchip(x, y) -> PiecewiseCubic:
    """Fit a shape-preserving Hermite cubic."""
    return PchipInterpolator().fit(x, y).curve_


def fit_akima(x, y) -> PiecewiseCubic:
    """Fit Akima's locally weighted cubic."""
    return AkimaInterpolator().fit(x, y).curve_


__all__ = [
    "__version__",
    "AccuracyReport",
    "AkimaInterpolator",
    "AxisNotInvertibleError",
    "BDResult",
    "BDSummary",
    "BdworkError",
    "CubicSplineInterpolator",
    "CurveValidationError",
    "Dataset",
    "DEFAULT_COMPARISON_METHODS",
    "IngestError",
    "METHOD_NAMES",
    "MethodComparison",
    "MetricPair",
    "NoOverlapError",
    "OutOfDomainError",
    "OverlapBounds",
    "PchipInterpolator",
    "PiecewiseCubic",
    "PlotData",
    "PlotSeries",
    "PointError",
    "RDCurve",
    "RDPoint",
    "SingleCubicInterpolator",
    "ValidationVerdict",
    "aggregate_bd",
    "assess",
    "bd_quality",
    "bd_rate",
    "build_plot_data",
    "compare_methods",
    "curves_from_arrays",
    "fit_akima",
    "fit_csi",
    "fit_pchip",
    "fit_single_cubic",
    "ingest_dataset",
    "log_transform",
    "make_interpolator",
    "normalize_method",
    "overlap_bounds",
    "point_requirement",
    "render_svg",
    "validate_curve",
    "write_dataset_csv",
    "write_dataset_json",
]
