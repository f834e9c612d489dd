"""Simple (one-regressor) ordinary least squares with full diagnostics.

Student-t tail probabilities are computed here rather than borrowed from a
statistics package: the two-sided p-value is ``I_{df/(df+t^2)}(df/2, 1/2)``,
the regularized incomplete beta function evaluated by a continued fraction
(modified Lentz).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DegenerateX, DegenerateY, InvalidDf, LengthMismatch, TooFewPoints

P_FLOOR = 1e-300
_CF_TOL = 1e-12
_CF_MAX_ITER = 500
_TINY = 1e-300


@dataclass(frozen=True)
class RegressionSummary:
    """Result of one OLS run of ``y = slope * x + intercept``."""

    slope: float
    intercept: float
    se_slope: float
    se_intercept: float
    t_slope: float
    t_intercept: float
    p_slope: float
    p_intercept: float
    r2: float
    r2_adj: float
    pearson_r: float
    n: int
    residual_variance: float

    def predict(self, x):
        return self.slope * np.asarray(x, dtype=float) + self.intercept

    def as_dict(self) -> dict:
        return dict(self.__dict__)


def _as_pair(xs, ys) -> tuple[np.ndarray, np.ndarray]:
    x = np.asarray(xs, dtype=float).ravel()
    y = np.asarray(ys, dtype=float).ravel()
    if x.shape != y.shape:
        raise LengthMismatch(f"xs has {x.size} values, ys has {y.size}")
    if x.size < 3:
        raise TooFewPoints(f"need at least 3 points, got {x.size}")
    return x, y


def _betacf(a: float, b: float, x: float) -> float:
    """Continued fraction for the incomplete beta function (modified Lentz)."""
    qab, qap, qam = a + b, a + 1.0, a - 1.0
    c = 1.0
    d = 1.0 - qab * x / qap
    if abs(d) < _TINY:
        d = _TINY
    d = 1.0 / d
    h = d
    for m in range(1, _CF_MAX_ITER + 1):
        m2 = 2 * m
        aa = m * (b - m) * x / ((qam + m2) * (a + m2))
        d = 1.0 + aa * d
        if abs(d) < _TINY:
            d = _TINY
        c = 1.0 + aa / c
        if abs(c) < _TINY:
            c = _TINY
        d = 1.0 / d
        h *= d * c
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2))
        d = 1.0 + aa * d
        if abs(d) < _TINY:
            d = _TINY
        c = 1.0 + aa / c
        if abs(c) < _TINY:
            c = _TINY
        d = 1.0 / d
        delta = d * c
        h *= delta
        if abs(delta - 1.0) < _CF_TOL:
            return h
    raise ArithmeticError(f"incomplete beta continued fraction did not converge (a={a}, b={b}, x={x})")


def betainc(a: float, b: float, x: float) -> float:
    """Regularized incomplete beta function ``I_x(a, b)`` for ``a, b > 0``."""
    if not 0.0 <= x <= 1.0:
        raise ValueError(f"x must lie in [0, 1], got {x}")
    if x == 0.0 or x == 1.0:
        return x
    log_front = (
        math.lgamma(a + b) - math.lgamma(a) - math.lgamma(b) + a * math.log(x) + b * math.log1p(-x)
    )
    front = math.exp(log_front)
    # the continued fraction converges fast only on this side of the mean
    if x < (a + 1.0) / (a + b + 2.0):
        return front * _betacf(a, b, x) / a
    return 1.0 - front * _betacf(b, a, 1.0 - x) / b


def student_t_pvalue(t: float, df: int) -> float:
    """Two-sided tail probability ``P(|T_df| >= |t|)``, floored at ``1e-300``."""
    if df < 1:
        raise InvalidDf(f"degrees of freedom must be >= 1, got {df}")
    if math.isnan(t):
        return float("nan")
    if math.isinf(t):
        return P_FLOOR
    if t == 0.0:
        return 1.0
    x = df / (df + t * t)
    p = betainc(df / 2.0, 0.5, x)
    return min(1.0, max(P_FLOOR, p))


def pearson(xs, ys) -> float:
    """Sample correlation coefficient between ``xs`` and ``ys``."""
    x, y = _as_pair(xs, ys)
    dx, dy = x - x.mean(), y - y.mean()
    sxx, syy = float(dx @ dx), float(dy @ dy)
    if sxx == 0.0:
        raise DegenerateX("xs has zero variance")
    if syy == 0.0:
        raise DegenerateY("ys has zero variance")
    r = float(dx @ dy) / math.sqrt(sxx * syy)
    return max(-1.0, min(1.0, r))


def _t_ratio(coef: float, se: float) -> float:
    if se > 0.0:
        return coef / se
    if coef == 0.0:
        return 0.0
    return math.copysign(math.inf, coef)


def ols_fit(xs, ys) -> RegressionSummary:
    """Fit ``y = slope * x + intercept`` by least squares.

    Uses centered sums, so the slope is ``Sxy / Sxx`` and the intercept
    ``ybar - slope * xbar``. The residual variance is ``SSE / (n - 2)``
    and the adjusted R-squared uses ``n - 2`` degrees of freedom. When ``ys``
    is constant, ``r2`` and ``pearson_r`` are reported as 0.
    """
    x, y = _as_pair(xs, ys)
    n = x.size
    xbar, ybar = x.mean(), y.mean()
    dx, dy = x - xbar, y - ybar
    sxx = float(dx @ dx)
    if sxx == 0.0:
        raise DegenerateX("xs has zero variance")
    syy = float(dy @ dy)
    sxy = float(dx @ dy)

    slope = sxy / sxx
    intercept = float(ybar - slope * xbar)
    resid = y - (slope * x + intercept)
    sse = float(resid @ resid)
    df = n - 2
    sigma2 = sse / df

    se_slope = math.sqrt(sigma2 / sxx)
    se_intercept = math.sqrt(sigma2 * (1.0 / n + xbar * xbar / sxx))
    t_slope = _t_ratio(slope, se_slope)
    t_intercept = _t_ratio(intercept, se_intercept)

    if syy == 0.0:
        r2, r = 0.0, 0.0
    else:
        r2 = min(1.0, max(0.0, 1.0 - sse / syy))
        r = max(-1.0, min(1.0, sxy / math.sqrt(sxx * syy)))
    r2_adj = 1.0 - (1.0 - r2) * (n - 1) / df

    return RegressionSummary(
        slope=slope,
        intercept=intercept,
        se_slope=se_slope,
        se_intercept=se_intercept,
        t_slope=t_slope,
        t_intercept=t_intercept,
        p_slope=student_t_pvalue(t_slope, df),
        p_intercept=student_t_pvalue(t_intercept, df),
        r2=r2,
        r2_adj=r2_adj,
        pearson_r=r,
        n=n,
        residual_variance=sigma2,
    )
