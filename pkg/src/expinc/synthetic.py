"""Synthetic cumulative samples drawn from (or lying exactly on) the shifted exponential."""

from __future__ import annotations

import numpy as np

from .dataset import CumulativeSample


def exact_sample(mu: float, theta: float, fractions) -> CumulativeSample:
    """Thresholds ``x = mu + theta * ln(1/P)`` for each fraction ``P``."""
    p = np.asarray(fractions, dtype=float)
    return CumulativeSample.from_arrays(mu + theta * np.log(1.0 / p), p)


def exact_grid(mu=5000.0, theta=10000.0, n=50, lo=0.05, hi=0.95) -> CumulativeSample:
    return exact_sample(mu, theta, np.linspace(hi, lo, n))


def sampled_quantiles(mu: float, theta: float, n_draws: int, n_points: int = 100, seed=None) -> CumulativeSample:
    """Empirical ``P(t >= x)`` of ``n_draws`` shifted-exponential draws at ``n_points`` order statistics.

    The i-th kept point is the order statistic ``x_(k)`` with
    ``k = floor(i * n_draws / n_points)`` and fraction ``(n_draws - k) / n_draws``.
    When ``n_points >= n_draws`` every draw becomes a point.
    """
    rng = np.random.default_rng(seed)
    draws = np.sort(mu + rng.exponential(theta, size=n_draws))
    m = min(n_points, n_draws)
    k = (np.arange(m) * n_draws) // m
    return CumulativeSample.from_arrays(draws[k], (n_draws - k) / n_draws)
