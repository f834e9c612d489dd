"""Shifted-exponential income law: truncated fitting, inequality read-outs and allocation counting."""

from .dataset import CountryRecord, CumulativeSample, QuantileRow, from_percentile_table, ingest, normalize
from .econ import adjust_uc, cross_country_regression, gini_from_fit, mu_decompose
from .estimator import ExponentialIncomeRegressor
from .expofit import (
    ExponentialLaw,
    FitResult,
    TruncationConfig,
    fit,
    fit_corollary1,
    fit_two_stage,
)
from .regress import RegressionSummary, ols_fit, pearson, student_t_pvalue

__version__ = "0.1.0"

__all__ = [
    "CountryRecord",
    "CumulativeSample",
    "ExponentialIncomeRegressor",
    "ExponentialLaw",
    "FitResult",
    "QuantileRow",
    "RegressionSummary",
    "TruncationConfig",
    "adjust_uc",
    "cross_country_regression",
    "fit",
    "fit_corollary1",
    "fit_two_stage",
    "from_percentile_table",
    "gini_from_fit",
    "mu_decompose",
    "ingest",
    "normalize",
    "ols_fit",
    "pearson",
    "student_t_pvalue",
]
