import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from expinc.dataset import CumulativeSample
from expinc.errors import (
    AllPointsBelowMu,
    ExpincError,
    InvalidConfig,
    NoNegativeCorrelation,
    NonConvergent,
    TooFewPoints,
    ZeroFraction,
)
from expinc.expofit import (
    TruncationConfig,
    fit_corollary1,
    fit_two_stage,
    log_transform,
    lower_truncate,
    upper_truncate_max_r2,
)
from expinc.regress import pearson
from expinc.synthetic import exact_grid, exact_sample, sampled_quantiles
from oracles import r2_adj_by_drop

MU, THETA = 5000.0, 10000.0
COR = TruncationConfig(mode="corollary1")


def test_log_transform_values():
    s = CumulativeSample.from_arrays([1, 2, 3, 4, 5], [1.0, math.exp(-1), 0.2, 0.1, 0.05])
    pts = log_transform(s)
    assert pts[0] == (1.0, 0.0)
    assert pts[1][1] == pytest.approx(-1.0, abs=1e-15)
    assert all(y <= 0 for _, y in pts)


def test_log_transform_zero_fraction():
    class Row:
        threshold, frac_at_or_above = 1.0, 0.0

    class Fake:
        points = [Row()]

    with pytest.raises(ZeroFraction):
        log_transform(Fake())


def test_upper_truncate_exact_line():
    pts = [(float(i), -0.1 * i) for i in range(20)]
    drop, s = upper_truncate_max_r2(pts)
    assert drop == 0
    assert s.r2 == pytest.approx(1.0, abs=1e-14)


def test_upper_truncate_plateau():
    x = np.arange(20, dtype=float)
    y = -0.1 * x
    y[-3:] = y[-4] - np.array([0.001, 0.002, 0.003])
    drop, _ = upper_truncate_max_r2(np.column_stack([x, y]))
    scores = r2_adj_by_drop(x, y, 10)
    assert int(np.argmax(scores)) == 3
    assert drop == 3


def test_upper_truncate_bound_interaction():
    # 6 points, frac 0.5, min_points 5: only drops 0 and 1 are admissible
    x = np.arange(6, dtype=float)
    y = -x.copy()
    y[-2:] = [-4.0, -4.01]
    cfg = TruncationConfig(min_points=5, max_upper_drop_frac=0.5)
    drop, _ = upper_truncate_max_r2(np.column_stack([x, y]), cfg)
    assert drop in (0, 1)
    assert drop == 1


def test_upper_truncate_too_few():
    with pytest.raises(TooFewPoints):
        upper_truncate_max_r2([(0, 0), (1, -1), (2, -2), (3, -3)])


def test_lower_truncate_cases():
    pts = [(float(i), -float(i)) for i in range(1, 6)]
    assert lower_truncate(pts, 0.0)[0] == 0
    start, kept = lower_truncate(pts, 2.5)
    assert start == 2 and kept[0][0] == 3.0
    assert lower_truncate(pts, 3.0)[0] == 2
    with pytest.raises(AllPointsBelowMu):
        lower_truncate(pts, 10.0)


def test_two_stage_exact_recovery():
    r = fit_two_stage(exact_sample(MU, THETA, np.linspace(0.95, 0.05, 19)))
    assert r.law.theta == pytest.approx(THETA, rel=1e-6)
    assert r.law.mu == pytest.approx(MU, rel=1e-6)
    assert r.upper_drop_count == 0 and r.lower_index == 0


def _power_tail_sample():
    P = np.linspace(0.95, 0.05, 19)
    x = MU + THETA * np.log(1 / P)
    P2 = P.copy()
    # fatter tail: the top three fractions sit above the exponential
    P2[-3:] = [0.17, 0.14, 0.12]
    return x, P2


def test_two_stage_drops_power_tail():
    x, P = _power_tail_sample()
    s = CumulativeSample.from_arrays(x, P)
    scores = r2_adj_by_drop(x, np.log(P), int(0.5 * len(x)))
    # exhaustive oracle: 3 is the smallest drop count reaching the maximum
    best = max(scores)
    assert min(d for d, v in enumerate(scores) if v >= best - 1e-12) == 3
    r = fit_two_stage(s)
    assert r.upper_drop_count == 3
    assert r.law.theta == pytest.approx(THETA, rel=0.01)
    assert r.law.mu == pytest.approx(MU, rel=0.01)


def test_two_stage_report_fields():
    r = fit_two_stage(exact_grid())
    rep = r.report()
    assert list(rep) == ["theta", "mu", "x_min", "x_max", "pct_below", "pct_above", "r2_adj"]
    assert rep["pct_below"] == pytest.approx(5.0)
    assert rep["pct_above"] == pytest.approx(5.0)


def test_fixed_upper_drop():
    x, P = _power_tail_sample()
    s = CumulativeSample.from_arrays(x, P)
    r = fit_two_stage(s, TruncationConfig(upper_drop=3))
    assert r.upper_drop_count == 3
    assert r.x_max == pytest.approx(x[-4])


def test_corollary1_exact_recovery_one_iteration():
    r = fit_corollary1(exact_grid(), COR)
    assert r.iterations == 1
    assert r.law.mu == pytest.approx(MU, rel=1e-12)
    assert r.law.theta == pytest.approx(THETA, rel=1e-12)


def _sub_mu_contaminated():
    """Exact law above mu, plus four low-income points whose fractions fall short of it."""
    low = np.array([1000.0, 2000.0, 3000.0, 4000.0])
    high = 5500.0 + 2000.0 * np.arange(15)
    x = np.concatenate([low, high])
    P = np.concatenate([[0.995, 0.99, 0.98, 0.97], np.exp(-(high - MU) / THETA)])
    return CumulativeSample.from_arrays(x, P)


def test_corollary1_sub_mu_contamination():
    s = _sub_mu_contaminated()
    cfg = TruncationConfig(mode="corollary1", upper_drop=0)
    r = fit_corollary1(s, cfg)
    assert r.iterations >= 2
    assert r.law.mu == pytest.approx(MU, rel=0.02)
    # ground truth: the retained window is exactly the uncontaminated points
    assert r.lower_index == 4
    # a single pass over the full sample lands far from mu
    assert abs(r.mu_history[0] - MU) / MU > 0.02


def test_corollary1_gamma_margin_rejects():
    s = sampled_quantiles(MU, THETA, 2000, 40, seed=3)
    with pytest.raises(NoNegativeCorrelation, match="does not fit"):
        fit_corollary1(s, TruncationConfig(mode="corollary1", gamma=-0.99999999))


def test_corollary1_iteration_cap():
    s = _sub_mu_contaminated()
    with pytest.raises(NonConvergent):
        fit_corollary1(s, TruncationConfig(mode="corollary1", upper_drop=0, max_iterations=1))


@pytest.mark.parametrize("kwargs", [dict(min_points=2), dict(max_upper_drop_frac=1.0), dict(max_iterations=0),
                                    dict(mode="x"), dict(gamma=0.1), dict(upper_drop=-1)])
def test_invalid_config(kwargs):
    with pytest.raises(InvalidConfig):
        TruncationConfig(**kwargs)


def _check_identities(r):
    s = r.summary
    assert r.law.theta == pytest.approx(-1 / s.slope, rel=1e-15)
    if -s.intercept / s.slope >= 0:
        assert r.law.mu == pytest.approx(-s.intercept / s.slope, rel=1e-15)
    # the limit form xbar - ybar/slope is the same number
    assert s.slope < 0


@pytest.mark.parametrize("seed", range(10))
def test_fit_identities_and_corollary_conditions(seed):
    s = sampled_quantiles(MU, THETA, 20_000, 60, seed=seed)
    x = s.thresholds
    y = np.log(s.fractions)
    _check_identities(fit_two_stage(s))
    r = fit_corollary1(s, COR)
    _check_identities(r)
    g = r.lower_index
    hi = len(s) - r.upper_drop_count
    assert pearson(x[g:hi], y[g:hi]) < 0
    assert (g == 0 or x[g - 1] < r.law.mu) and r.law.mu <= x[g]


def test_two_stage_retained_above_first_mu():
    s = sampled_quantiles(MU, THETA, 5000, 80, seed=9)
    r = fit_two_stage(s)
    x = s.thresholds
    assert np.all(x[r.lower_index : len(s) - r.upper_drop_count] >= r.mu_history[0])


def test_both_modes_agree_on_exact_data():
    s = exact_grid()
    a, b = fit_two_stage(s), fit_corollary1(s, COR)
    assert a.law.theta == pytest.approx(b.law.theta, rel=1e-9)
    assert a.law.mu == pytest.approx(b.law.mu, rel=1e-9)


def test_consistency_error_shrinks():
    def med(n_draws):
        errs = [abs(fit_two_stage(sampled_quantiles(MU, THETA, n_draws, 100, seed)).law.mu - MU) for seed in range(50)]
        return float(np.median(errs))

    assert med(10_000) < med(100)


@st.composite
def noisy_samples(draw):
    n = draw(st.integers(8, 40))
    mu = draw(st.floats(100, 20000))
    theta = draw(st.floats(100, 50000))
    P = np.linspace(0.97, 0.02, n)
    noise = np.array(draw(st.lists(st.floats(-0.05, 0.05), min_size=n, max_size=n)))
    x = mu + theta * np.log(1 / P) * (1 + noise)
    x = np.maximum.accumulate(x) + np.arange(n) * 1e-3 * theta
    return CumulativeSample.from_arrays(x, P)


def _outcome(fn, s, cfg):
    try:
        return fn(s, cfg)
    except ExpincError as exc:
        return type(exc)


@given(noisy_samples(), st.floats(0.01, 100))
@settings(max_examples=60, deadline=None)
def test_scale_equivariance(sample, c):
    scaled = CumulativeSample.from_arrays(sample.thresholds * c, sample.fractions)
    for fn, cfg in ((fit_two_stage, TruncationConfig()), (fit_corollary1, COR)):
        a, b = _outcome(fn, sample, cfg), _outcome(fn, scaled, cfg)
        if isinstance(a, type):
            assert a is b
            continue
        assert b.law.theta == pytest.approx(c * a.law.theta, rel=1e-9)
        assert b.law.mu == pytest.approx(c * a.law.mu, rel=1e-9, abs=1e-9 * c * a.law.theta)
        assert b.summary.r2_adj == pytest.approx(a.summary.r2_adj, abs=1e-12)
        assert b.summary.pearson_r == pytest.approx(a.summary.pearson_r, abs=1e-12)
        assert b.upper_drop_count == a.upper_drop_count
        assert b.lower_index == a.lower_index
