"""Economic read-outs of a fitted law and the cross-country MLCR/UC regression.

The bundled table ``data/mlcr_uc_europe.csv`` lists, for 26 European
countries and the years 2011-2014, the fitted marginal labour-capital return
``mu`` (EUR) next to the unemployment compensation converted to EUR.
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass
from functools import lru_cache
from importlib import resources
from typing import Iterable, Sequence

from .allocsim import mu_from_production
from .errors import InvalidLaw, InvalidRate, InvalidRecord, TooFewPoints, UnknownYear
from .expofit import ExponentialLaw
from .regress import RegressionSummary, ols_fit

DATA_FILE = "mlcr_uc_europe.csv"


@dataclass(frozen=True)
class CountryEconRow:
    code: str
    year: int
    mu: float
    uc_adjusted: float

    def __post_init__(self):
        if not self.mu > 0:
            raise InvalidRecord(f"{self.code} {self.year}: mu must be positive, got {self.mu}")
        if not self.uc_adjusted > 0:
            raise InvalidRecord(f"{self.code} {self.year}: uc_adjusted must be positive, got {self.uc_adjusted}")


def gini_from_fit(law: ExponentialLaw) -> float:
    """Gini coefficient ``1 / (2 (1 + mu/theta))`` of the shifted exponential.

    Ranges over ``(0, 0.5]``; exactly 0.5 for a pure exponential (``mu = 0``).
    """
    theta, mu = law.theta, law.mu
    if not (theta > 0 and mu >= 0 and math.isfinite(theta) and math.isfinite(mu)):
        raise InvalidLaw(f"need theta > 0 and mu >= 0, got theta={theta!r}, mu={mu!r}")
    return 1.0 / (2.0 * (1.0 + mu / theta))


def gini(theta: float, mu: float) -> float:
    """:func:`gini_from_fit` on raw parameters, raising :class:`InvalidLaw` on bad input."""
    if not (theta > 0 and mu >= 0 and math.isfinite(theta) and math.isfinite(mu)):
        raise InvalidLaw(f"need theta > 0 and mu >= 0, got theta={theta!r}, mu={mu!r}")
    return gini_from_fit(ExponentialLaw(theta=theta, mu=mu))


def mu_decompose(sigma: float, omega: float, r: float, mrts: float) -> float:
    """Marginal labour-capital return split into wage and capital terms.

    Same value as :func:`expinc.allocsim.mu_from_production`; kept here next to
    the other economic read-outs.
    """
    return mu_from_production(sigma, omega, r, mrts)


def adjust_uc(uc_lcu: float, lcu_rate: float) -> float:
    """Unemployment compensation in EUR from local currency units."""
    if not (lcu_rate > 0 and math.isfinite(lcu_rate)):
        raise InvalidRate(f"exchange rate must be positive, got {lcu_rate!r}")
    return uc_lcu / lcu_rate


def parse_rows(text: str) -> list[CountryEconRow]:
    reader = csv.DictReader(io.StringIO(text))
    return [
        CountryEconRow(r["code"], int(r["year"]), float(r["mu"]), float(r["uc_adjusted"]))
        for r in reader
    ]


@lru_cache(maxsize=None)
def _bundled() -> tuple[CountryEconRow, ...]:
    text = resources.files("expinc").joinpath("data", DATA_FILE).read_text(encoding="utf-8")
    return tuple(parse_rows(text))


def load_rows(path=None) -> list[CountryEconRow]:
    """Rows of a ``code,year,mu,uc_adjusted`` file; the bundled table by default."""
    if path is None:
        return list(_bundled())
    with open(path, encoding="utf-8") as fh:
        return parse_rows(fh.read())


def available_years(rows: Iterable[CountryEconRow] | None = None) -> list[int]:
    rows = _bundled() if rows is None else rows
    return sorted({r.year for r in rows})


def rows_for_year(rows: Sequence[CountryEconRow], year: int) -> list[CountryEconRow]:
    picked = [r for r in rows if r.year == year]
    if not picked:
        raise UnknownYear(f"no rows for year {year}; available: {available_years(rows)}")
    return picked


def cross_country_regression(rows: Sequence[CountryEconRow] | None, year: int) -> RegressionSummary:
    """OLS of ``mu`` on adjusted unemployment compensation across countries for one year."""
    picked = rows_for_year(_bundled() if rows is None else rows, year)
    if len(picked) < 3:
        raise TooFewPoints(f"need at least 3 countries for {year}, got {len(picked)}")
    return ols_fit([r.uc_adjusted for r in picked], [r.mu for r in picked])
