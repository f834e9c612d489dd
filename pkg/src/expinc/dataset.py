"""Quantile income tables: ingestion, validation and currency/period normalization.

The canonical in-memory form is a :class:`CumulativeSample`, an ordered list of
``(threshold, frac_at_or_above)`` rows, i.e. the empirical ``P(t >= x)``.
Two text layouts are understood::

    threshold,frac_at_or_above      # canonical
    cum_frac_below,threshold        # percentile table
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass, replace
from typing import Iterable, Mapping, Sequence

import numpy as np

from .errors import (
    FractionOutOfRange,
    InvalidRecord,
    MissingColumn,
    NonMonotoneFractions,
    NonMonotoneInput,
    NonMonotoneThresholds,
    TooFewRows,
)

MIN_ROWS = 5
PERIODS = ("annual", "monthly", "weekly")
PERIOD_FACTORS = {"annual": 1, "monthly": 12, "weekly": 52}

CANONICAL_SCHEMA = {"threshold": "threshold", "frac_at_or_above": "frac_at_or_above"}
PERCENTILE_SCHEMA = {"cum_frac_below": "cum_frac_below", "threshold": "threshold"}


@dataclass(frozen=True)
class QuantileRow:
    threshold: float
    frac_at_or_above: float

    def __post_init__(self):
        if not (self.threshold >= 0 and math.isfinite(self.threshold)):
            raise NonMonotoneThresholds(f"threshold must be finite and >= 0, got {self.threshold!r}")
        if not (0 < self.frac_at_or_above <= 1):
            raise FractionOutOfRange(
                f"fraction at or above {self.threshold!r} must lie in (0, 1], got {self.frac_at_or_above!r}"
            )


@dataclass(frozen=True)
class CumulativeSample:
    """Validated empirical cumulative distribution ``P(t >= x)``.

    Thresholds are strictly increasing, fractions strictly decreasing, and
    there are at least ``MIN_ROWS`` points.
    """

    points: tuple[QuantileRow, ...]
    currency_tag: str = "LCU"
    period_tag: str = "annual"

    def __post_init__(self):
        object.__setattr__(self, "points", tuple(self.points))
        if self.period_tag not in PERIODS:
            raise InvalidRecord(f"period_tag must be one of {PERIODS}, got {self.period_tag!r}")
        if len(self.points) < MIN_ROWS:
            raise TooFewRows(f"need at least {MIN_ROWS} rows, got {len(self.points)}")
        for prev, cur in zip(self.points, self.points[1:]):
            if not cur.threshold > prev.threshold:
                raise NonMonotoneThresholds(
                    f"thresholds must be strictly increasing: {prev.threshold!r} then {cur.threshold!r}"
                )
            if not cur.frac_at_or_above < prev.frac_at_or_above:
                raise NonMonotoneFractions(
                    "cumulative fractions must be strictly decreasing in the threshold: "
                    f"{prev.frac_at_or_above!r} at {prev.threshold!r} then "
                    f"{cur.frac_at_or_above!r} at {cur.threshold!r}"
                )

    def __len__(self):
        return len(self.points)

    @property
    def thresholds(self) -> np.ndarray:
        return np.array([p.threshold for p in self.points], dtype=float)

    @property
    def fractions(self) -> np.ndarray:
        return np.array([p.frac_at_or_above for p in self.points], dtype=float)

    @classmethod
    def from_arrays(cls, thresholds, fractions, currency_tag="LCU", period_tag="annual"):
        """Build a sample from parallel arrays, sorting by threshold first."""
        xs = [float(v) for v in thresholds]
        ps = [float(v) for v in fractions]
        if len(xs) != len(ps):
            raise InvalidRecord(f"length mismatch: {len(xs)} thresholds, {len(ps)} fractions")
        rows = sorted((QuantileRow(x, p) for x, p in zip(xs, ps)), key=lambda r: r.threshold)
        return cls(tuple(rows), currency_tag=currency_tag, period_tag=period_tag)


@dataclass(frozen=True)
class CountryRecord:
    """Conversion metadata for one country-year.

    ``lcu_rate`` is local currency units per unit of the target currency and
    ``period_factor`` is the number of reporting periods per year.
    """

    code: str
    year: int
    lcu_rate: float
    period_factor: int = 1

    def __post_init__(self):
        if not (self.lcu_rate > 0 and math.isfinite(self.lcu_rate)):
            raise InvalidRecord(f"lcu_rate must be positive, got {self.lcu_rate!r}")
        if self.period_factor not in (1, 12, 52):
            raise InvalidRecord(f"period_factor must be 1, 12 or 52, got {self.period_factor!r}")


def _read_columns(path, wanted: Iterable[str]) -> list[dict[str, str]]:
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.DictReader(fh)
        header = reader.fieldnames or []
        missing = [c for c in wanted if c not in header]
        if missing:
            raise MissingColumn(f"{path}: missing column(s) {missing}; header is {header}")
        return [row for row in reader if any((v or "").strip() for v in row.values())]


def ingest(
    path,
    schema: Mapping[str, str] | None = None,
    currency_tag: str = "LCU",
    period_tag: str = "annual",
) -> CumulativeSample:
    """Read a canonical ``threshold,frac_at_or_above`` file.

    ``schema`` maps the canonical field names to the column names actually used
    in the file. Rows are sorted by threshold before validation, so source
    tables may be in any order.
    """
    schema = dict(CANONICAL_SCHEMA, **(schema or {}))
    tcol, fcol = schema["threshold"], schema["frac_at_or_above"]
    records = _read_columns(path, (tcol, fcol))
    if len(records) < MIN_ROWS:
        raise TooFewRows(f"{path}: need at least {MIN_ROWS} data rows, got {len(records)}")
    rows = sorted(
        (QuantileRow(float(r[tcol]), float(r[fcol])) for r in records),
        key=lambda r: r.threshold,
    )
    return CumulativeSample(tuple(rows), currency_tag=currency_tag, period_tag=period_tag)


def percentile_rows(percentiles: Sequence[tuple[float, float]]) -> list[QuantileRow]:
    """Convert ``(cum_frac_below, threshold)`` pairs into canonical rows.

    No minimum-size check is applied here; see :func:`from_percentile_table`.
    """
    pairs = [(float(c), float(t)) for c, t in percentiles]
    for c, t in pairs:
        if not 0 < c < 1:
            raise NonMonotoneInput(f"cumulative fraction below must lie in (0, 1), got {c!r}")
    for (c0, t0), (c1, t1) in zip(pairs, pairs[1:]):
        if not c1 > c0:
            raise NonMonotoneInput(f"cumulative fractions must increase: {c0!r} then {c1!r}")
        if not t1 > t0:
            raise NonMonotoneInput(f"thresholds must increase: {t0!r} then {t1!r}")
    return [QuantileRow(t, 1.0 - c) for c, t in pairs]


def from_percentile_table(
    percentiles: Sequence[tuple[float, float]],
    currency_tag: str = "LCU",
    period_tag: str = "annual",
) -> CumulativeSample:
    """Build a sample from a percentile table (fraction below, threshold)."""
    rows = percentile_rows(percentiles)
    if len(rows) < MIN_ROWS:
        raise TooFewRows(f"need at least {MIN_ROWS} rows, got {len(rows)}")
    return CumulativeSample(tuple(rows), currency_tag=currency_tag, period_tag=period_tag)


def ingest_percentile(path, currency_tag: str = "LCU", period_tag: str = "annual") -> CumulativeSample:
    records = _read_columns(path, ("cum_frac_below", "threshold"))
    pairs = sorted((float(r["cum_frac_below"]), float(r["threshold"])) for r in records)
    return from_percentile_table(pairs, currency_tag=currency_tag, period_tag=period_tag)


def read_sample(path, currency_tag: str = "LCU", period_tag: str = "annual") -> CumulativeSample:
    """Read either supported layout, choosing by the header row."""
    with open(path, newline="", encoding="utf-8") as fh:
        header = next(csv.reader(fh), [])
    if "cum_frac_below" in header:
        return ingest_percentile(path, currency_tag=currency_tag, period_tag=period_tag)
    return ingest(path, currency_tag=currency_tag, period_tag=period_tag)


def emit(sample: CumulativeSample, path) -> None:
    """Write ``sample`` in the canonical layout at full float precision."""
    with open(path, "w", newline="", encoding="utf-8") as fh:
        fh.write(dumps(sample))


def dumps(sample: CumulativeSample) -> str:
    lines = ["threshold,frac_at_or_above"]
    lines += [f"{p.threshold!r},{p.frac_at_or_above!r}" for p in sample.points]
    return "\n".join(lines) + "\n"


def normalize(sample: CumulativeSample, rec: CountryRecord, currency_tag: str | None = None) -> CumulativeSample:
    """Rescale thresholds to annual income in the target currency.

    Each threshold becomes ``threshold * period_factor / lcu_rate``; the
    fractions are left untouched.
    """
    rows = tuple(
        QuantileRow(p.threshold * rec.period_factor / rec.lcu_rate, p.frac_at_or_above)
        for p in sample.points
    )
    return replace(
        sample,
        points=rows,
        period_tag="annual",
        currency_tag=currency_tag if currency_tag is not None else sample.currency_tag,
    )
