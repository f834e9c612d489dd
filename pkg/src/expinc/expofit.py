"""Fitting the shifted exponential income law ``P(t >= x) = exp(-(x - mu) / theta)``.

On the log scale the law is the straight line ``ln P = slope * x + intercept``
with ``slope = -1/theta`` and ``intercept = mu/theta``, valid for ``x >= mu``.
Real quantile tables deviate from it at both ends: a power-law tail at high
income and a bulge of sub-``mu`` incomes at the bottom. Two truncation
procedures are provided:

``fit_two_stage``
    Cut the top by maximising adjusted R^2 over the number of dropped top
    points, derive ``mu`` from that line, drop every point below ``mu`` and
    refit once.

``fit_corollary1``
    Iterate the lower cut until the ``mu`` regressed on the retained points
    ``x_g..x_n`` falls inside ``(x_{g-1}, x_g]`` while the retained points are
    still negatively correlated.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace

import numpy as np

from .dataset import CumulativeSample
from .errors import (
    AllPointsBelowMu,
    DegenerateY,
    InvalidConfig,
    NoNegativeCorrelation,
    NonConvergent,
    NotExponentialDecay,
    TooFewPoints,
    ZeroFraction,
)
from .regress import RegressionSummary, ols_fit, pearson

MODES = ("two_stage", "corollary1")

# r2_adj gains smaller than this do not justify dropping more points
R2_TIE_TOL = 1e-12


@dataclass(frozen=True)
class ExponentialLaw:
    """Shifted exponential law with decay scale ``theta`` and support edge ``mu``."""

    theta: float
    mu: float

    def __post_init__(self):
        if not (self.theta > 0 and math.isfinite(self.theta)):
            raise NotExponentialDecay(f"theta must be positive and finite, got {self.theta!r}")
        if not (self.mu >= 0 and math.isfinite(self.mu)):
            raise NotExponentialDecay(f"mu must be non-negative and finite, got {self.mu!r}")

    def survival(self, x):
        """``P(t >= x)``; equal to 1 below the support edge."""
        x = np.asarray(x, dtype=float)
        return np.minimum(1.0, np.exp(-(x - self.mu) / self.theta))

    def quantile(self, p):
        """Income at cumulative fraction-below ``p``."""
        return self.mu - self.theta * np.log1p(-np.asarray(p, dtype=float))

    @property
    def mean(self) -> float:
        return self.mu + self.theta


@dataclass(frozen=True)
class TruncationConfig:
    """Knobs for both fit procedures.

    ``upper_drop`` fixes the number of top points to discard; ``None`` selects
    it by maximising adjusted R^2. ``gamma`` is the correlation margin of the
    iterative procedure: retained points must have ``pearson < gamma``.
    """

    min_points: int = 5
    max_upper_drop_frac: float = 0.5
    max_iterations: int = 20
    mode: str = "two_stage"
    gamma: float = 0.0
    upper_drop: int | None = None

    def __post_init__(self):
        if self.min_points < 3:
            raise InvalidConfig(f"min_points must be >= 3, got {self.min_points}")
        if not 0 < self.max_upper_drop_frac < 1:
            raise InvalidConfig(f"max_upper_drop_frac must lie in (0, 1), got {self.max_upper_drop_frac}")
        if self.max_iterations < 1:
            raise InvalidConfig(f"max_iterations must be >= 1, got {self.max_iterations}")
        if self.mode not in MODES:
            raise InvalidConfig(f"mode must be one of {MODES}, got {self.mode!r}")
        if not self.gamma <= 0:
            raise InvalidConfig(f"gamma must be <= 0, got {self.gamma}")
        if self.upper_drop is not None and self.upper_drop < 0:
            raise InvalidConfig(f"upper_drop must be >= 0, got {self.upper_drop}")


@dataclass(frozen=True)
class FitResult:
    law: ExponentialLaw
    summary: RegressionSummary
    lower_index: int
    upper_drop_count: int
    frac_below_xmin: float
    frac_above_xmax: float
    x_min: float
    x_max: float
    iterations: int
    mu_history: tuple[float, ...] = field(default_factory=tuple)
    mode: str = "two_stage"

    @property
    def n_retained(self) -> int:
        return self.summary.n

    def report(self) -> dict:
        """The Table-S1 style record: scale, edge, fit window and fit quality."""
        return {
            "theta": self.law.theta,
            "mu": self.law.mu,
            "x_min": self.x_min,
            "x_max": self.x_max,
            "pct_below": 100.0 * self.frac_below_xmin,
            "pct_above": 100.0 * self.frac_above_xmax,
            "r2_adj": self.summary.r2_adj,
        }


def log_transform(sample: CumulativeSample) -> list[tuple[float, float]]:
    """Pairs ``(x, ln P)`` for every row of the sample."""
    out = []
    for p in sample.points:
        if p.frac_at_or_above <= 0:
            raise ZeroFraction(f"fraction at {p.threshold!r} is zero; its logarithm is undefined")
        out.append((p.threshold, math.log(p.frac_at_or_above)))
    return out


def _xy(points) -> tuple[np.ndarray, np.ndarray]:
    arr = np.asarray(points, dtype=float).reshape(-1, 2)
    return arr[:, 0].copy(), arr[:, 1].copy()


def _max_upper_drop(n: int, cfg: TruncationConfig) -> int:
    return max(0, min(int(math.floor(cfg.max_upper_drop_frac * n)), n - cfg.min_points))


def upper_truncate_max_r2(points, cfg: TruncationConfig = TruncationConfig()) -> tuple[int, RegressionSummary]:
    """Choose how many top points to drop by maximising adjusted R^2.

    Every drop count from 0 to ``min(floor(max_upper_drop_frac * n), n - min_points)``
    is tried; the global maximiser wins and ties go to the smaller count.
    """
    x, y = _xy(points)
    n = x.size
    if n < cfg.min_points:
        raise TooFewPoints(f"need at least {cfg.min_points} points, got {n}")
    best_drop, best = 0, ols_fit(x, y)
    for drop in range(1, _max_upper_drop(n, cfg) + 1):
        s = ols_fit(x[: n - drop], y[: n - drop])
        if s.r2_adj > best.r2_adj + R2_TIE_TOL:
            best_drop, best = drop, s
    return best_drop, best


def lower_truncate(points, mu: float) -> tuple[int, list[tuple[float, float]]]:
    """Drop leading points below ``mu``; returns the first kept index and the kept points."""
    x, y = _xy(points)
    start = int(np.searchsorted(x, mu, side="left"))
    if start >= x.size:
        raise AllPointsBelowMu(f"every threshold lies below mu = {mu!r} (largest is {x[-1]!r})")
    return start, list(zip(x[start:].tolist(), y[start:].tolist()))


def _law_from(summary: RegressionSummary) -> ExponentialLaw:
    if not summary.slope < 0:
        raise NotExponentialDecay(
            f"log-fraction does not decrease with income (slope {summary.slope!r}); "
            "the data does not fit the exponential law"
        )
    mu = -summary.intercept / summary.slope
    # a support edge below zero income carries no meaning; clamp a tiny negative estimate
    return ExponentialLaw(theta=-1.0 / summary.slope, mu=max(mu, 0.0))


def _mu_of(summary: RegressionSummary) -> float:
    return -summary.intercept / summary.slope


def _upper_stage(x, y, cfg: TruncationConfig) -> tuple[int, RegressionSummary]:
    n = x.size
    if cfg.upper_drop is None:
        return upper_truncate_max_r2(np.column_stack([x, y]), cfg)
    if n - cfg.upper_drop < 3:
        raise TooFewPoints(f"dropping {cfg.upper_drop} of {n} points leaves fewer than 3")
    return cfg.upper_drop, ols_fit(x[: n - cfg.upper_drop], y[: n - cfg.upper_drop])


def _result(x, p, lo, hi, summary, drop, iterations, history, mode) -> FitResult:
    return FitResult(
        law=_law_from(summary),
        summary=summary,
        lower_index=lo,
        upper_drop_count=drop,
        frac_below_xmin=float(1.0 - p[lo]),
        frac_above_xmax=float(p[hi - 1]),
        x_min=float(x[lo]),
        x_max=float(x[hi - 1]),
        iterations=iterations,
        mu_history=tuple(float(m) for m in history),
        mode=mode,
    )


def fit_two_stage(sample: CumulativeSample, cfg: TruncationConfig = TruncationConfig()) -> FitResult:
    """Top cut by maximal adjusted R^2, then a single cut at the implied ``mu``.

    Examples
    --------
    >>> import numpy as np
    >>> P = np.linspace(0.95, 0.05, 19)
    >>> s = CumulativeSample.from_arrays(5000 + 10000 * np.log(1 / P), P)
    >>> r = fit_two_stage(s)
    >>> round(r.law.theta), round(r.law.mu)
    (10000, 5000)
    """
    pts = log_transform(sample)
    x, y = _xy(pts)
    p = sample.fractions

    drop, first = _upper_stage(x, y, cfg)
    hi = x.size - drop
    if not first.slope < 0:
        _law_from(first)
    mu1 = _mu_of(first)
    lo, _ = lower_truncate(np.column_stack([x[:hi], y[:hi]]), mu1)
    if hi - lo < 3:
        raise TooFewPoints(f"only {hi - lo} points remain at or above mu = {mu1:.6g}")
    final = ols_fit(x[lo:hi], y[lo:hi])
    return _result(x, p, lo, hi, final, drop, 1, [mu1, _mu_of(final)], "two_stage")


def _correlation(x, y) -> float:
    try:
        return pearson(x, y)
    except DegenerateY:
        return 0.0


def fit_corollary1(sample: CumulativeSample, cfg: TruncationConfig = TruncationConfig(mode="corollary1")) -> FitResult:
    """Iterative lower truncation with a correlation-sign safeguard.

    Starting from the first index ``l`` whose tail ``x_l..x_n`` has correlation
    below ``cfg.gamma``, regress the tail, compute ``mu`` and locate the index
    ``h`` of the first threshold ``>= mu``. If ``h == l`` the estimate is
    self-consistent and accepted; otherwise the search restarts from ``h``.
    The top of the sample is cut first exactly as in :func:`fit_two_stage`.

    Raises
    ------
    NoNegativeCorrelation
        No tail with at least three points has correlation below ``gamma``.
    NonConvergent
        ``cfg.max_iterations`` regressions did not reach a self-consistent index.
    """
    pts = log_transform(sample)
    x, y = _xy(pts)
    p = sample.fractions
    drop, _ = _upper_stage(x, y, cfg)
    hi = x.size - drop
    xs, ys = x[:hi], y[:hi]

    def first_negative(start: int) -> int:
        for l in range(start, hi - 2):
            if _correlation(xs[l:], ys[l:]) < cfg.gamma:
                return l
        raise NoNegativeCorrelation(
            f"no tail starting at index >= {start} has income/log-fraction correlation below "
            f"{cfg.gamma}; the data does not fit the exponential law"
        )

    history: list[float] = []
    start = 0
    for it in range(1, cfg.max_iterations + 1):
        l = first_negative(start)
        summary = ols_fit(xs[l:], ys[l:])
        if not summary.slope < 0:
            _law_from(summary)
        mu = _mu_of(summary)
        history.append(mu)
        h = int(np.searchsorted(xs, mu, side="left"))
        if h == l:
            return _result(x, p, l, hi, summary, drop, it, history, "corollary1")
        if h >= hi:
            raise AllPointsBelowMu(f"every retained threshold lies below mu = {mu!r}")
        start = h
    raise NonConvergent(
        f"lower truncation index did not settle within {cfg.max_iterations} iterations "
        f"(mu history: {', '.join(f'{m:.6g}' for m in history)}); the data does not fit the exponential law"
    )


def fit(sample: CumulativeSample, cfg: TruncationConfig = TruncationConfig()) -> FitResult:
    """Dispatch on ``cfg.mode``."""
    if cfg.mode == "corollary1":
        return fit_corollary1(sample, cfg)
    return fit_two_stage(sample, cfg)


def with_mode(cfg: TruncationConfig, mode: str) -> TruncationConfig:
    return replace(cfg, mode=mode)
