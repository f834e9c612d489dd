"""scikit-learn compatible wrapper around the truncated exponential fit."""

from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator, RegressorMixin
from sklearn.utils.validation import check_array, check_is_fitted, check_X_y

from .dataset import CumulativeSample
from .expofit import TruncationConfig, fit


class ExponentialIncomeRegressor(RegressorMixin, BaseEstimator):
    """Fit ``P(t >= x) = exp(-(x - mu) / theta)`` to a cumulative income table.

    ``X`` holds the income thresholds (one column), ``y`` the fraction of the
    population at or above each threshold. Rows may come in any order.

    Parameters
    ----------
    mode : {'two_stage', 'corollary1'}
        Truncation procedure.
    min_points : int
        Fewest points any top cut may leave.
    max_upper_drop_frac : float
        Largest fraction of points the top cut may discard.
    max_iterations : int
        Iteration cap for ``'corollary1'``.
    gamma : float
        Correlation margin for ``'corollary1'``.
    upper_drop : int or None
        Fixed number of top points to discard; ``None`` maximises adjusted R^2.

    Attributes
    ----------
    theta_, mu_ : float
        Fitted scale and support edge.
    result_ : FitResult
        Full fit record including diagnostics and truncation indices.
    """

    def __init__(
        self,
        mode="two_stage",
        min_points=5,
        max_upper_drop_frac=0.5,
        max_iterations=20,
        gamma=0.0,
        upper_drop=None,
    ):
        self.mode = mode
        self.min_points = min_points
        self.max_upper_drop_frac = max_upper_drop_frac
        self.max_iterations = max_iterations
        self.gamma = gamma
        self.upper_drop = upper_drop

    def _config(self) -> TruncationConfig:
        return TruncationConfig(
            min_points=self.min_points,
            max_upper_drop_frac=self.max_upper_drop_frac,
            max_iterations=self.max_iterations,
            mode=self.mode,
            gamma=self.gamma,
            upper_drop=self.upper_drop,
        )

    def fit(self, X, y):
        X, y = check_X_y(X, y, y_numeric=True)
        if X.shape[1] != 1:
            raise ValueError(f"expected a single income column, got {X.shape[1]}")
        self.n_features_in_ = 1
        sample = CumulativeSample.from_arrays(X[:, 0], y)
        self.result_ = fit(sample, self._config())
        self.theta_ = self.result_.law.theta
        self.mu_ = self.result_.law.mu
        return self

    def predict(self, X):
        """Fitted ``P(t >= x)``; 1 below the support edge."""
        check_is_fitted(self, "result_")
        X = check_array(X)
        return self.result_.law.survival(X[:, 0])

    def transform(self, X):
        """Income rescaled by the fitted decay scale, ``x / theta``."""
        check_is_fitted(self, "result_")
        X = check_array(X)
        return X / self.theta_

    def log_survival(self, X):
        check_is_fitted(self, "result_")
        X = check_array(X)
        return -(X[:, 0] - self.mu_) / self.theta_

    def score(self, X, y, sample_weight=None):
        """R^2 on the log scale, where the regression is run."""
        from sklearn.metrics import r2_score

        X, y = check_X_y(X, y, y_numeric=True)
        return r2_score(np.log(y), self.log_survival(X), sample_weight=sample_weight)
