"""Empirical spectral exponents from computed counting curves.

The growth order is read off as the least-squares slope of log(count)
against log(x). Finite-depth atomizations are trustworthy only below the
inverse spectral scale of the smallest cell, so the default regression
window keeps the top two decades of the computed grid and drops the
largest half-decade.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import List, Optional, Sequence, Tuple

import numpy as np

Curve = Sequence[Tuple[float, float]]

DEFAULT_WINDOW = (2.0, 0.5)  # decades below the top: [top - 2.0, top - 0.5]


def _usable(curve: Curve) -> np.ndarray:
    pts = np.asarray([(x, c) for x, c in curve], dtype=float)
    if pts.size == 0:
        raise ValueError("empty curve")
    return pts[(pts[:, 1] >= 1.0) & (pts[:, 0] > 0.0)]


def _window_points(pts: np.ndarray, window: Tuple[float, float]) -> np.ndarray:
    top = math.log10(pts[:, 0].max())
    lo, hi = top - window[0], top - window[1]
    logx = np.log10(pts[:, 0])
    return pts[(logx >= lo) & (logx <= hi)]


def fit_exponent(curve: Curve, window: Tuple[float, float] = DEFAULT_WINDOW) -> Tuple[float, float]:
    """(slope, stderr) of log count vs log x over the window.

    Requires at least ten points with count >= 1 spanning three decades,
    and at least three of them inside the window.
    """
    pts = _usable(curve)
    if len(pts) < 10:
        raise ValueError(f"need >= 10 points with count >= 1, have {len(pts)}")
    span = math.log10(pts[:, 0].max() / pts[:, 0].min())
    if span < 3.0:
        raise ValueError(f"x values span {span:.2f} decades, need >= 3")
    sel = _window_points(pts, window)
    if len(sel) < 3:
        raise ValueError(f"only {len(sel)} points in the regression window")
    lx = np.log(sel[:, 0])
    lc = np.log(sel[:, 1])
    sxx = float(np.sum((lx - lx.mean()) ** 2))
    slope = float(np.sum((lx - lx.mean()) * (lc - lc.mean())) / sxx)
    intercept = lc.mean() - slope * lx.mean()
    residuals = lc - intercept - slope * lx
    dof = len(sel) - 2
    stderr = math.sqrt(float(np.sum(residuals ** 2)) / dof / sxx) if dof > 0 else 0.0
    return slope, stderr


def normalized_limit(curve: Curve, gamma: float) -> List[Tuple[float, float]]:
    """Pointwise (x, count * x^(-gamma))."""
    if gamma <= 0:
        raise ValueError("gamma must be positive")
    return [(x, c * x ** (-gamma)) for x, c in curve]


def tail_statistics(curve: Curve, gamma: float,
                    window: Tuple[float, float] = DEFAULT_WINDOW) -> Tuple[float, float]:
    """(mean, coefficient of variation) of normalized counts in the window."""
    pts = _window_points(_usable(curve), window)
    if len(pts) == 0:
        raise ValueError("no usable points in the tail window")
    vals = pts[:, 1] * pts[:, 0] ** (-gamma)
    mean = float(vals.mean())
    cv = float(vals.std() / mean) if mean > 0 else math.inf
    return mean, cv


def w_proxies(tail_means: Sequence[float]) -> List[float]:
    """Per-seed tail means scaled by their cross-seed median; exploratory only."""
    med = float(np.median(np.asarray(tail_means, dtype=float)))
    return [m / med for m in tail_means]


@dataclass(frozen=True)
class AsymptoticsReport:
    slope: float
    slope_stderr: float
    gamma_target: float
    tail_mean: float
    tail_cv: float
    slope_abs_error: float
    slope_ok: bool
    normalized_tail: List[Tuple[float, float]] = field(repr=False)
    w_proxy: Optional[float] = None

    def to_dict(self) -> dict:
        return {
            "slope": self.slope,
            "slope_stderr": self.slope_stderr,
            "gamma_target": self.gamma_target,
            "tail_mean": self.tail_mean,
            "tail_cv": self.tail_cv,
            "slope_abs_error": self.slope_abs_error,
            "slope_ok": self.slope_ok,
            "w_proxy": self.w_proxy,
            "normalized_tail": [[x, v] for x, v in self.normalized_tail],
        }


def asymptotics_report(curve: Curve, gamma_target: float, *,
                       slope_tol: float = 0.05,
                       window: Tuple[float, float] = DEFAULT_WINDOW) -> AsymptoticsReport:
    """Slope fit plus normalized-tail summary against a target exponent."""
    slope, stderr = fit_exponent(curve, window)
    mean, cv = tail_statistics(curve, gamma_target, window)
    pts = _window_points(_usable(curve), window)
    tail = [(float(x), float(c * x ** (-gamma_target))) for x, c in pts]
    err = abs(slope - gamma_target)
    return AsymptoticsReport(slope, stderr, gamma_target, mean, cv, err,
                             err <= slope_tol, tail)
