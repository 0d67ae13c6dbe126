"""Piecewise-cubic curve representation shared by all interpolation backends.

Each segment j covers [x_j, x_{j+1}] and stores coefficients (a, b, c, d) of

    p_j(t) = a + b*t + c*t**2 + d*t**3,   t = x - x_j

Local coordinates keep the coefficients well conditioned for large abscissae
(PSNR or VMAF values far from zero). Evaluation never extrapolates, and the
integral is the exact antiderivative summed over the covered segments.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import OutOfDomainError

__all__ = ["PiecewiseCubic", "shift_cubic"]


def shift_cubic(coef, offset):
    """Re-express a cubic a+b*t+c*t^2+d*t^3 around t = offset (Taylor shift)."""
    a, b, c, d = (float(v) for v in coef)
    s = float(offset)
    return (
        ((d * s + c) * s + b) * s + a,
        (3.0 * d * s + 2.0 * c) * s + b,
        3.0 * d * s + c,
        d,
    )


@dataclass(frozen=True)
class PiecewiseCubic:
    """Breakpoints plus per-segment local cubic coefficients.

    Attributes
    ----------
    breakpoints : ndarray, shape (n+1,)
        Strictly increasing abscissae.
    coefficients : ndarray, shape (n, 4)
        Columns are (a, b, c, d) for p_j(t) = a + b t + c t^2 + d t^3 with
        t local to the segment's left breakpoint.
    method : str
        Identifier of the backend that produced the fit.
    """

    breakpoints: np.ndarray
    coefficients: np.ndarray
    method: str = field(default="")

    def __post_init__(self):
        bp = np.ascontiguousarray(self.breakpoints, dtype=np.float64)
        cf = np.ascontiguousarray(self.coefficients, dtype=np.float64)
        if bp.ndim != 1 or bp.size < 2:
            raise ValueError("need at least two breakpoints")
        if cf.shape != (bp.size - 1, 4):
            raise ValueError(
                f"coefficients shape {cf.shape} does not match "
                f"{bp.size - 1} segments"
            )
        if np.any(np.diff(bp) <= 0):
            raise ValueError("breakpoints must be strictly increasing")
        bp.setflags(write=False)
        cf.setflags(write=False)
        object.__setattr__(self, "breakpoints", bp)
        object.__setattr__(self, "coefficients", cf)

    @property
    def x_min(self) -> float:
        return float(self.breakpoints[0])

    @property
    def x_max(self) -> float:
        return float(self.breakpoints[-1])

    @property
    def n_segments(self) -> int:
        return self.coefficients.shape[0]

    def _check_domain(self, x: np.ndarray, what: str) -> None:
        if np.any(x < self.breakpoints[0]) or np.any(x > self.breakpoints[-1]):
            bad = x[(x < self.breakpoints[0]) | (x > self.breakpoints[-1])]
            raise OutOfDomainError(
                f"{what} at x={float(np.atleast_1d(bad)[0])!r} outside fitted "
                f"range [{self.x_min!r}, {self.x_max!r}] (no extrapolation)"
            )

    def _segment_index(self, x: np.ndarray) -> np.ndarray:
        # Right-closed convention: x == x_n falls into the last segment.
        idx = np.searchsorted(self.breakpoints, x, side="right") - 1
        return np.clip(idx, 0, self.n_segments - 1)

    def evaluate(self, x):
        """Evaluate the curve at scalar or array ``x`` inside the fitted range."""
        scalar = np.isscalar(x) or getattr(x, "ndim", None) == 0
        xv = np.atleast_1d(np.asarray(x, dtype=np.float64))
        self._check_domain(xv, "evaluation")
        idx = self._segment_index(xv)
        t = xv - self.breakpoints[idx]
        a, b, c, d = (self.coefficients[idx, k] for k in range(4))
        y = ((d * t + c) * t + b) * t + a
        return float(y[0]) if scalar else y

    def derivative(self, x, order: int = 1):
        """Evaluate the first or second derivative (same segment convention)."""
        if order not in (1, 2):
            raise ValueError("order must be 1 or 2")
        scalar = np.isscalar(x) or getattr(x, "ndim", None) == 0
        xv = np.atleast_1d(np.asarray(x, dtype=np.float64))
        self._check_domain(xv, "derivative evaluation")
        idx = self._segment_index(xv)
        t = xv - self.breakpoints[idx]
        _, b, c, d = (self.coefficients[idx, k] for k in range(4))
        if order == 1:
            y = (3.0 * d * t + 2.0 * c) * t + b
        else:
            y = 6.0 * d * t + 2.0 * c
        return float(y[0]) if scalar else y

    def _antiderivative(self, seg: int, t: float) -> float:
        a, b, c, d = self.coefficients[seg]
        return ((((d / 4.0) * t + c / 3.0) * t + b / 2.0) * t + a) * t

    def integrate(self, a: float, b: float) -> float:
        """Exact integral over [a, b], which must lie inside the fitted range."""
        a = float(a)
        b = float(b)
        if a > b:
            raise ValueError(f"integration bounds reversed: {a!r} > {b!r}")
        self._check_domain(np.array([a, b]), "integration")
        lo = int(self._segment_index(np.array([a]))[0])
        hi = int(self._segment_index(np.array([b]))[0])
        bp = self.breakpoints
        if lo == hi:
            return self._antiderivative(lo, b - bp[lo]) - self._antiderivative(
                lo, a - bp[lo]
            )
        total = self._antiderivative(lo, bp[lo + 1] - bp[lo]) - self._antiderivative(
            lo, a - bp[lo]
        )
        for j in range(lo + 1, hi):
            total += self._antiderivative(j, bp[j + 1] - bp[j])
        total += self._antiderivative(hi, b - bp[hi])
        return float(total)
