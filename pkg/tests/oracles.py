"""Independent reference computations used only by the tests.

None of these share code paths with the package: they use brute force,
closed-form linear algebra or scipy quadrature.
"""

import itertools
import math

import numpy as np
from scipy import integrate, special


def normal_equation_fit(xs, ys):
    """Solve [[n, Sx], [Sx, Sxx]] @ [a, b] = [Sy, Sxy] directly."""
    x = np.asarray(xs, dtype=float)
    y = np.asarray(ys, dtype=float)
    A = np.array([[x.size, x.sum()], [x.sum(), (x * x).sum()]])
    rhs = np.array([y.sum(), (x * y).sum()])
    intercept, slope = np.linalg.solve(A, rhs)
    return slope, intercept


def t_two_sided_quadrature(t, df):
    """2 * integral of the Student-t density from |t| to infinity."""
    logc = special.gammaln((df + 1) / 2) - special.gammaln(df / 2) - 0.5 * math.log(df * math.pi)
    c = math.exp(logc)

    def dens(s):
        return c * (1 + s * s / df) ** (-(df + 1) / 2)

    t = abs(t)
    # split at a few scales so quad sees the bulk and the tail separately
    edges = [t] + [e for e in (t + 1, t + 10, t + 100) if e > t]
    total = 0.0
    for a, b in zip(edges, edges[1:]):
        total += integrate.quad(dens, a, b, epsabs=1e-15, epsrel=1e-13, limit=200)[0]
    total += integrate.quad(dens, edges[-1], np.inf, epsabs=1e-15, epsrel=1e-13, limit=200)[0]
    return 2 * total


def lorenz_gini(mu, theta, span=50.0):
    """Gini of the shifted exponential as 1 - 2 * integral of the Lorenz curve.

    The Lorenz curve is parametrised by income x on [mu, mu + span*theta]:
    p(x) = 1 - exp(-(x-mu)/theta) and L(x) = (partial mean up to x) / mean,
    where the partial mean is integrated in closed form from t * f(t).
    """
    mean = mu + theta

    def f(x):
        return math.exp(-(x - mu) / theta) / theta

    def lorenz(x):
        return (mean - (x + theta) * math.exp(-(x - mu) / theta)) / mean

    area = integrate.quad(lambda x: lorenz(x) * f(x), mu, mu + span * theta, epsabs=1e-13, epsrel=1e-12, limit=500)[0]
    return 1 - 2 * area


def brute_force_allocations(n, y):
    """Every n-tuple of non-negative integers summing to y."""
    return [c for c in itertools.product(range(y + 1), repeat=n) if sum(c) == y]


def r2_adj_by_drop(x, y, max_drop):
    """Adjusted R^2 for each top-drop count, via numpy.polyfit."""
    out = []
    n = len(x)
    for d in range(max_drop + 1):
        xs, ys = np.asarray(x[: n - d]), np.asarray(y[: n - d])
        coef = np.polyfit(xs, ys, 1)
        resid = ys - np.polyval(coef, xs)
        m = xs.size
        r2 = 1 - (resid @ resid) / ((ys - ys.mean()) @ (ys - ys.mean()))
        out.append(1 - (1 - r2) * (m - 1) / (m - 2))
    return out
