"""Interpolation backends producing a shared piecewise-cubic representation.

All backends follow the scikit-learn estimator protocol: construct with
hyper-parameters, ``fit(x, y)`` on 1-D supporting points, then ``predict(x)``
inside the fitted range. ``integrate(a, b)`` exposes the exact antiderivative
of the fitted curve; the fitted :class:`~bdwork.piecewise.PiecewiseCubic`
lives in the ``curve_`` attribute.

Backends
--------
- ``SingleCubicInterpolator``: one global cubic through exactly four points.
- ``CubicSplineInterpolator``: C2 spline with not-a-knot, natural, or
  clamped-zero boundary conditions.
- ``PchipInterpolator``: shape-preserving C1 Hermite cubic with
  Fritsch-Carlson slope selection.
- ``AkimaInterpolator``: C1 Hermite cubic with Akima's (1970) locally
  weighted slopes, resistant to overshoot near knees.
"""

from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator
from sklearn.exceptions import NotFittedError

from .errors import CurveValidationError
from .piecewise import PiecewiseCubic, shift_cubic

__all__ = [
    "METHOD_NAMES",
    "DEFAULT_COMPARISON_METHODS",
    "SingleCubicInterpolator",
    "CubicSplineInterpolator",
    "PchipInterpolator",
    "AkimaInterpolator",
    "check_supporting_points",
    "normalize_method",
    "make_interpolator",
    "point_requirement",
]

#: Canonical backend identifiers accepted everywhere a method is selectable.
METHOD_NAMES = (
    "single_cubic",
    "csi_not_a_knot",
    "csi_natural",
    "csi_clamped",
    "pchip",
    "akima",
)

#: The five piecewise-capable backends ranked against each other by default.
#: ``single_cubic`` is excluded because it duplicates ``csi_not_a_knot`` on
#: the only point count it accepts.
DEFAULT_COMPARISON_METHODS = (
    "csi_not_a_knot",
    "csi_natural",
    "csi_clamped",
    "pchip",
    "akima",
)


def normalize_method(name: str) -> str:
    """Return the canonical method id, parsing case-insensitively."""
    canonical = str(name).strip().lower()
    if canonical not in METHOD_NAMES:
        raise ValueError(
            f"unknown interpolation method {name!r}; "
            f"expected one of {', '.join(METHOD_NAMES)}"
        )
    return canonical


def check_supporting_points(x, y, min_points=2, exact_points=None, method=""):
    """Validate 1-D supporting points and return them as float64 arrays.

    Enforces equal length, finiteness, strictly increasing ``x``, and the
    backend's point-count requirement.
    """
    x = np.ascontiguousarray(x, dtype=np.float64)
    y = np.ascontiguousarray(y, dtype=np.float64)
    label = f" for {method}" if method else ""
    if x.ndim != 1 or y.ndim != 1:
        raise CurveValidationError("x and y must be one-dimensional")
    if x.shape != y.shape:
        raise CurveValidationError(
            f"x and y lengths differ: {x.size} vs {y.size}"
        )
    if exact_points is not None and x.size != exact_points:
        raise CurveValidationError(
            f"requires exactly {exact_points} supporting points{label}, "
            f"got {x.size}"
        )
    if x.size < min_points:
        raise CurveValidationError(
            f"requires at least {min_points} supporting points{label}, "
            f"got {x.size}"
        )
    if not (np.all(np.isfinite(x)) and np.all(np.isfinite(y))):
        raise CurveValidationError("supporting points must be finite")
    if np.any(np.diff(x) <= 0):
        raise CurveValidationError("x values must be strictly increasing")
    return x, y


def _hermite_coefficients(x, y, slopes):
    """Local cubic coefficients for a C1 Hermite fit with knot slopes."""
    h = np.diff(x)
    m = np.diff(y) / h
    d0 = slopes[:-1]
    d1 = slopes[1:]
    coef = np.empty((x.size - 1, 4))
    coef[:, 0] = y[:-1]
    coef[:, 1] = d0
    coef[:, 2] = (3.0 * m - 2.0 * d0 - d1) / h
    coef[:, 3] = (d0 + d1 - 2.0 * m) / h**2
    return coef


class _FittedCurveMixin:
    """predict/integrate surface shared by every backend."""

    def _fitted_curve(self) -> PiecewiseCubic:
        curve = getattr(self, "curve_", None)
        if curve is None:
            raise NotFittedError(
                f"{type(self).__name__} is not fitted yet; call fit(x, y) first"
            )
        return curve

    def predict(self, x):
        """Evaluate the fitted curve at ``x`` (scalar or 1-D array-like)."""
        curve = self._fitted_curve()
        if np.isscalar(x) or getattr(x, "ndim", None) == 0:
            return curve.evaluate(float(x))
        return curve.evaluate(np.asarray(x, dtype=np.float64))

    def integrate(self, a: float, b: float) -> float:
        """Exact integral of the fitted curve over [a, b]."""
        return self._fitted_curve().integrate(a, b)


class SingleCubicInterpolator(_FittedCurveMixin, BaseEstimator):
    """Global third-order polynomial through exactly four supporting points.

    The four coefficients solve the 4x4 Vandermonde system in coordinates
    shifted to the first abscissa, then the polynomial is re-expressed per
    knot interval so the representation matches the piecewise backends.
    """

    method_name = "single_cubic"
    min_points = 4
    exact_points = 4

    def fit(self, x, y):
        x, y = check_supporting_points(
            x, y, self.min_points, self.exact_points, self.method_name
        )
        t = x - x[0]
        vander = np.vander(t, N=4, increasing=True)
        try:
            base = np.linalg.solve(vander, y)
        except np.linalg.LinAlgError as exc:  # distinct x makes this unreachable
            raise CurveValidationError(f"singular cubic system: {exc}") from exc
        coef = np.array([shift_cubic(base, xj - x[0]) for xj in x[:-1]])
        self.curve_ = PiecewiseCubic(x, coef, self.method_name)
        return self


class CubicSplineInterpolator(_FittedCurveMixin, BaseEstimator):
    """C2 cubic spline with a selectable boundary condition.

    Parameters
    ----------
    boundary : {"not_a_knot", "natural", "clamped_zero"}
        ``not_a_knot`` requires the third derivative to be continuous across
        the first and last interior breakpoints (with four points this
        reproduces the single global cubic). ``natural`` pins the second
        derivative to zero at both ends; ``clamped_zero`` pins the first
        derivative to zero at both ends.
    """

    _BOUNDARIES = ("not_a_knot", "natural", "clamped_zero")

    def __init__(self, boundary: str = "not_a_knot"):
        self.boundary = boundary

    @property
    def method_name(self) -> str:
        mapping = {
            "not_a_knot": "csi_not_a_knot",
            "natural": "csi_natural",
            "clamped_zero": "csi_clamped",
        }
        return mapping.get(self.boundary, "csi")

    @property
    def min_points(self) -> int:
        return 4 if self.boundary == "not_a_knot" else 3

    exact_points = None

    def fit(self, x, y):
        if self.boundary not in self._BOUNDARIES:
            raise ValueError(
                f"unknown boundary {self.boundary!r}; "
                f"expected one of {', '.join(self._BOUNDARIES)}"
            )
        x, y = check_supporting_points(
            x, y, self.min_points, None, self.method_name
        )
        moments = self._solve_moments(x, y)
        h = np.diff(x)
        coef = np.empty((x.size - 1, 4))
        coef[:, 0] = y[:-1]
        coef[:, 1] = np.diff(y) / h - h * (2.0 * moments[:-1] + moments[1:]) / 6.0
        coef[:, 2] = moments[:-1] / 2.0
        coef[:, 3] = np.diff(moments) / (6.0 * h)
        self.curve_ = PiecewiseCubic(x, coef, self.method_name)
        return self

    def _solve_moments(self, x, y):
        """Solve the linear system for knot second derivatives (moments).

        Curves here are short (a handful of knots), so a dense solve is
        simpler and just as robust as a banded one.
        """
        n = x.size - 1
        h = np.diff(x)
        system = np.zeros((n + 1, n + 1))
        rhs = np.zeros(n + 1)
        for j in range(1, n):
            system[j, j - 1] = h[j - 1]
            system[j, j] = 2.0 * (h[j - 1] + h[j])
            system[j, j + 1] = h[j]
            rhs[j] = 6.0 * ((y[j + 1] - y[j]) / h[j] - (y[j] - y[j - 1]) / h[j - 1])
        if self.boundary == "natural":
            system[0, 0] = 1.0
            system[n, n] = 1.0
        elif self.boundary == "clamped_zero":
            system[0, 0] = 2.0 * h[0]
            system[0, 1] = h[0]
            rhs[0] = 6.0 * (y[1] - y[0]) / h[0]
            system[n, n - 1] = h[n - 1]
            system[n, n] = 2.0 * h[n - 1]
            rhs[n] = -6.0 * (y[n] - y[n - 1]) / h[n - 1]
        else:  # not_a_knot: third derivative continuous across x_1 and x_{n-1}
            system[0, 0] = h[1]
            system[0, 1] = -(h[0] + h[1])
            system[0, 2] = h[0]
            system[n, n - 2] = h[n - 1]
            system[n, n - 1] = -(h[n - 2] + h[n - 1])
            system[n, n] = h[n - 2]
        return np.linalg.solve(system, rhs)


class PchipInterpolator(_FittedCurveMixin, BaseEstimator):
    """Shape-preserving piecewise-cubic Hermite interpolation.

    Knot slopes follow Fritsch and Carlson (1980): zero wherever the adjacent
    secants change sign or vanish, otherwise the weighted harmonic mean of the
    secants; boundary slopes use the one-sided three-point formula clamped to
    preserve shape. Monotone data yields a monotone interpolant.
    """

    method_name = "pchip"
    min_points = 2
    exact_points = None

    def fit(self, x, y):
        x, y = check_supporting_points(x, y, self.min_points, None, self.method_name)
        slopes = self._slopes(x, y)
        self.curve_ = PiecewiseCubic(
            x, _hermite_coefficients(x, y, slopes), self.method_name
        )
        return self

    @staticmethod
    def _boundary_slope(h0, h1, m0, m1):
        d = ((2.0 * h0 + h1) * m0 - h0 * m1) / (h0 + h1)
        if np.sign(d) != np.sign(m0):
            return 0.0
        if np.sign(m0) != np.sign(m1) and abs(d) > 3.0 * abs(m0):
            return 3.0 * m0
        return d

    def _slopes(self, x, y):
        n = x.size
        h = np.diff(x)
        m = np.diff(y) / h
        d = np.zeros(n)
        if n == 2:
            d[:] = m[0]
            return d
        for k in range(1, n - 1):
            if np.sign(m[k - 1]) != np.sign(m[k]) or m[k - 1] == 0.0 or m[k] == 0.0:
                d[k] = 0.0
            else:
                w1 = 2.0 * h[k] + h[k - 1]
                w2 = h[k] + 2.0 * h[k - 1]
                # near-zero secants may overflow the intermediate reciprocal;
                # the harmonic mean then correctly collapses to 0
                with np.errstate(over="ignore"):
                    d[k] = (w1 + w2) / (w1 / m[k - 1] + w2 / m[k])
        d[0] = self._boundary_slope(h[0], h[1], m[0], m[1])
        d[n - 1] = self._boundary_slope(h[-1], h[-2], m[-1], m[-2])
        return d


class AkimaInterpolator(_FittedCurveMixin, BaseEstimator):
    """Akima's (1970) locally weighted piecewise-cubic interpolation.

    The slope at knot i mixes the two adjacent secants, weighted by how much
    the secants vary on the far sides, which keeps flat regions flat and
    avoids the overshoot global splines show near sharp knees. Secants are
    extended past the ends quadratically (D(-1) = 2 D(0) - D(1), mirrored on
    the right); where both weights vanish the slope falls back to the mean of
    the adjacent secants.
    """

    method_name = "akima"
    min_points = 3
    exact_points = None

    def fit(self, x, y):
        x, y = check_supporting_points(x, y, self.min_points, None, self.method_name)
        slopes = self._slopes(x, y)
        self.curve_ = PiecewiseCubic(
            x, _hermite_coefficients(x, y, slopes), self.method_name
        )
        return self

    @staticmethod
    def _slopes(x, y):
        n = x.size
        secants = np.diff(y) / np.diff(x)
        # ext[j + 2] = secant j; two quadratic extensions on either side.
        ext = np.empty(n + 3)
        ext[2 : n + 1] = secants
        ext[1] = 2.0 * ext[2] - ext[3]
        ext[0] = 2.0 * ext[1] - ext[2]
        ext[n + 1] = 2.0 * ext[n] - ext[n - 1]
        ext[n + 2] = 2.0 * ext[n + 1] - ext[n]
        slopes = np.empty(n)
        for i in range(n):
            w_plus = abs(ext[i + 3] - ext[i + 2])
            w_minus = abs(ext[i + 1] - ext[i])
            if w_plus + w_minus == 0.0:
                slopes[i] = 0.5 * (ext[i + 1] + ext[i + 2])
            else:
                slopes[i] = (w_plus * ext[i + 1] + w_minus * ext[i + 2]) / (
                    w_plus + w_minus
                )
        return slopes


_FACTORIES = {
    "single_cubic": lambda: SingleCubicInterpolator(),
    "csi_not_a_knot": lambda: CubicSplineInterpolator(boundary="not_a_knot"),
    "csi_natural": lambda: CubicSplineInterpolator(boundary="natural"),
    "csi_clamped": lambda: CubicSplineInterpolator(boundary="clamped_zero"),
    "pchip": lambda: PchipInterpolator(),
    "akima": lambda: AkimaInterpolator(),
}


def make_interpolator(method: str):
    """Instantiate the backend for a canonical or case-variant method name."""
    return _FACTORIES[normalize_method(method)]()


def point_requirement(method: str):
    """Return (min_points, exact_points or None) for a method."""
    est = make_interpolator(method)
    return est.min_points, est.exact_points
