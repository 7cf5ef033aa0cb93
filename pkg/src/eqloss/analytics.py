"""Historic-loss normalization and loss-threshold probabilities.

Historic losses stated in year-y dollars are restated to a reference year
(2012 by default) through three multipliers:

    inflation   IPD = ipd_index(ref) / ipd_index(y)
    icw         ICW = (wealth(ref)/wealth(y)) / (cpi(ref)/cpi(y))
    population  dP  = population(ref) / population(y)
    wealth      W   = ICW / dP

    D_ref = D_y * IPD * W * dP        (equivalently D_y * IPD * ICW)

Both product forms are computed and cross-checked. Predicted losses are
treated as the median of a lognormal distribution whose log-space standard
deviation zeta is a per-country configuration value; bucket probabilities
over a loss-threshold ladder come from the standard normal CDF.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass
from decimal import Decimal
from pathlib import Path
from typing import Mapping, Sequence

from .errors import (
    ConsistencyError,
    MissingDataError,
    OutOfRangeError,
    UndefinedValueError,
    ValidationError,
)
from .model import MonetaryAmount

REFERENCE_YEAR = 2012
DEFAULT_ZETA = 0.6  # placeholder log-stddev; every report must print the value used


@dataclass(frozen=True)
class SeriesPoint:
    ipd: float
    cpi: float
    wealth: float
    population: float

    def __post_init__(self) -> None:
        for name in ("ipd", "cpi", "wealth", "population"):
            if getattr(self, name) <= 0:
                raise ValidationError(f"economic index {name} must be strictly positive")


@dataclass(frozen=True)
class EconomicSeries:
    """Per-country yearly indices used to build normalization multipliers."""

    country: str
    years: Mapping[int, SeriesPoint]

    def point(self, year: int) -> SeriesPoint:
        try:
            return self.years[year]
        except KeyError:
            raise MissingDataError(f"series for {self.country} lacks year {year}") from None


@dataclass(frozen=True)
class NormalizationMultipliers:
    """Multiplier set for restating a year-y loss in reference-year dollars.

    ``icw`` may be omitted, in which case it is derived as wealth x pop and
    the set is consistent by construction.
    """

    ipd: float
    wealth: float
    pop: float
    icw: float | None = None

    def __post_init__(self) -> None:
        for name in ("ipd", "wealth", "pop"):
            if getattr(self, name) <= 0:
                raise ValidationError(f"multiplier {name} must be strictly positive")
        if self.icw is not None and self.icw <= 0:
            raise ValidationError("multiplier icw must be strictly positive")

    @property
    def effective_icw(self) -> float:
        return self.icw if self.icw is not None else self.wealth * self.pop

    def consistency_gap(self) -> float:
        """Relative disagreement between wealth x pop and the supplied ICW."""
        if self.icw is None:
            return 0.0
        return abs(self.wealth * self.pop - self.icw) / self.icw


def inflation_multiplier(series: EconomicSeries, year: int, reference_year: int = REFERENCE_YEAR) -> float:
    """Price-deflator ratio reference/y."""
    return series.point(reference_year).ipd / series.point(year).ipd


def icw_multiplier(series: EconomicSeries, year: int, reference_year: int = REFERENCE_YEAR) -> float:
    """Wealth ratio over CPI ratio, reference/y."""
    ref, base = series.point(reference_year), series.point(year)
    return (ref.wealth / base.wealth) / (ref.cpi / base.cpi)


def population_multiplier(series: EconomicSeries, year: int, reference_year: int = REFERENCE_YEAR) -> float:
    """Population ratio reference/y."""
    return series.point(reference_year).population / series.point(year).population


def wealth_multiplier(icw: float, pop: float) -> float:
    """Per-capita wealth multiplier: ICW divided by the population multiplier."""
    if pop <= 0:
        raise ValidationError("population multiplier must be strictly positive")
    return icw / pop


def multipliers_for_year(
    series: EconomicSeries, year: int, reference_year: int = REFERENCE_YEAR
) -> NormalizationMultipliers:
    """Build the full, internally consistent multiplier set from a series."""
    icw = icw_multiplier(series, year, reference_year)
    pop = population_multiplier(series, year, reference_year)
    return NormalizationMultipliers(
        ipd=inflation_multiplier(series, year, reference_year),
        wealth=wealth_multiplier(icw, pop),
        pop=pop,
        icw=icw,
    )


def normalize_loss(
    d_y: MonetaryAmount,
    multipliers: NormalizationMultipliers,
    reference_year: int = REFERENCE_YEAR,
    consistency_tol: float = 1e-6,
) -> MonetaryAmount:
    """Restate a historic loss in reference-year dollars.

    Computes D_y * ipd * wealth * pop and cross-checks it against
    D_y * ipd * icw; a disagreement beyond ``consistency_tol`` (relative)
    means the multiplier set itself is inconsistent. Multiplier sets quoted
    from printed tables are rounded, so callers validating against such
    tables pass a looser tolerance.
    """
    gap = multipliers.consistency_gap()
    if gap > consistency_tol:
        raise ConsistencyError(
            f"wealth x pop disagrees with icw by {gap:.2e} relative (tolerance {consistency_tol:.0e})"
        )
    amount = float(d_y.value) * multipliers.ipd * multipliers.wealth * multipliers.pop
    return MonetaryAmount(Decimal(repr(amount)), reference_year)


def percent_error(predicted: MonetaryAmount, normalized: MonetaryAmount) -> float:
    """(predicted - normalized) / normalized, in percent."""
    if predicted.reference_year != normalized.reference_year:
        raise ValidationError("percent error requires amounts in the same reference year")
    if normalized.value == 0:
        raise UndefinedValueError("percent error undefined for zero normalized loss")
    return (float(predicted.value) - float(normalized.value)) / float(normalized.value) * 100.0


# -- lognormal threshold probabilities ------------------------------------


def std_normal_cdf(x: float) -> float:
    """Standard normal CDF via the complementary error function."""
    return 0.5 * math.erfc(-x / math.sqrt(2.0))


@dataclass(frozen=True)
class LossDistribution:
    """Lognormal loss model: mean of ln(loss in millions) plus its spread."""

    mu_ln_loss: float
    zeta: float

    def __post_init__(self) -> None:
        if self.zeta <= 0:
            raise ValidationError("zeta must be strictly positive")

    @classmethod
    def from_predicted(cls, predicted_millions: float, zeta: float) -> "LossDistribution":
        if predicted_millions <= 0:
            raise ValidationError("predicted loss must be strictly positive")
        return cls(mu_ln_loss=math.log(predicted_millions), zeta=zeta)


@dataclass(frozen=True)
class LossThreshold:
    """Half-open loss bucket (lower, upper], in millions USD."""

    lower: float
    upper: float

    def __post_init__(self) -> None:
        if self.lower < 0:
            raise ValidationError("threshold lower bound must be non-negative")
        if self.upper <= self.lower:
            raise ValidationError("threshold upper bound must exceed the lower bound")


#: Decade ladder (0,1], (1,10], ... (100000,1000000], millions USD.
DEFAULT_LADDER: tuple[LossThreshold, ...] = tuple(
    LossThreshold(float(a), float(b))
    for a, b in zip(
        [0, 1, 10, 100, 1_000, 10_000, 100_000],
        [1, 10, 100, 1_000, 10_000, 100_000, 1_000_000],
    )
)


def threshold_probability(dist: LossDistribution, threshold: LossThreshold) -> float:
    """P(lower < L <= upper) for the lognormal loss model.

    A zero lower bound contributes nothing (its CDF argument is -inf).
    """
    upper_term = std_normal_cdf((math.log(threshold.upper) - dist.mu_ln_loss) / dist.zeta)
    if threshold.lower == 0:
        lower_term = 0.0
    else:
        lower_term = std_normal_cdf((math.log(threshold.lower) - dist.mu_ln_loss) / dist.zeta)
    return upper_term - lower_term


def threshold_bin(value: MonetaryAmount | float, ladder: Sequence[LossThreshold] = DEFAULT_LADDER) -> int:
    """Index of the bucket with lower < value <= upper (upper-inclusive)."""
    v = float(value.value) if isinstance(value, MonetaryAmount) else float(value)
    for i, t in enumerate(ladder):
        if t.lower < v <= t.upper:
            return i
    raise OutOfRangeError(f"value {v} falls outside the threshold ladder")


# -- economic series and reference-table loading --------------------------


def load_economic_series(path: str | Path) -> dict[str, EconomicSeries]:
    """Read per-country series from a CSV with header
    ``country,year,ipd,cpi,wealth,population``."""
    acc: dict[str, dict[int, SeriesPoint]] = {}
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.DictReader(fh)
        required = {"country", "year", "ipd", "cpi", "wealth", "population"}
        if reader.fieldnames is None or not required.issubset(reader.fieldnames):
            raise ValidationError(f"{path}: expected header country,year,ipd,cpi,wealth,population")
        for row in reader:
            country = row["country"].strip()
            years = acc.setdefault(country, {})
            year = int(row["year"])
            if year in years:
                raise ValidationError(f"{path}: duplicate year {year} for {country}")
            years[year] = SeriesPoint(
                ipd=float(row["ipd"]),
                cpi=float(row["cpi"]),
                wealth=float(row["wealth"]),
                population=float(row["population"]),
            )
    return {c: EconomicSeries(c, years) for c, years in sorted(acc.items())}


@dataclass(frozen=True)
class HistoricEventRow:
    """One row of the historic-earthquake validation table.

    Multi-country events appear as one combined row (no multipliers, with a
    percent error) plus one sub-row per country (multipliers, no percent
    error). ``d_2012``/``predicted`` are in millions of reference-year USD.
    """

    region: str
    country: str
    date: str
    magnitude: float
    latitude: float
    longitude: float
    d_y: float
    multipliers: NormalizationMultipliers | None
    d_2012: float
    predicted: float | None
    pct_error: float | None

    @property
    def is_combined(self) -> bool:
        return self.multipliers is None


def load_historic_events(path: str | Path) -> list[HistoricEventRow]:
    """Read the validation fixture CSV (see data/table1_earthquakes.csv)."""
    rows: list[HistoricEventRow] = []
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.DictReader(fh)
        for raw in reader:
            def opt(key: str) -> float | None:
                text = (raw.get(key) or "").strip()
                return float(text) if text else None

            ipd, icw, w, dp = opt("ipd"), opt("icw"), opt("w"), opt("dp")
            if ipd is None:
                multipliers = None
            else:
                assert icw is not None and w is not None and dp is not None
                multipliers = NormalizationMultipliers(ipd=ipd, wealth=w, pop=dp, icw=icw)
            rows.append(
                HistoricEventRow(
                    region=raw["region"].strip(),
                    country=raw["country"].strip(),
                    date=raw["date"].strip(),
                    magnitude=float(raw["mag"]),
                    latitude=float(raw["lat"]),
                    longitude=float(raw["lon"]),
                    d_y=float(raw["d_y"]),
                    multipliers=multipliers,
                    d_2012=float(raw["d_2012"]),
                    predicted=opt("predicted"),
                    pct_error=opt("pct_error"),
                )
            )
    return rows


@dataclass(frozen=True)
class RowCheck:
    row: HistoricEventRow
    recomputed_d_2012: float | None
    recomputed_pct_error: float | None
    normalized_bin: int | None
    predicted_bin: int | None

    @property
    def same_bin(self) -> bool | None:
        if self.normalized_bin is None or self.predicted_bin is None:
            return None
        return self.normalized_bin == self.predicted_bin


@dataclass(frozen=True)
class HistoricValidationReport:
    checks: list[RowCheck]
    combined_sums: dict[str, tuple[float, float]]  # region -> (sum of sub-rows, combined value)
    zeta: float = DEFAULT_ZETA

    @property
    def same_bin_count(self) -> int:
        return sum(1 for c in self.checks if c.same_bin)

    @property
    def event_count(self) -> int:
        return sum(1 for c in self.checks if c.same_bin is not None)


def validate_historic_events(
    rows: Sequence[HistoricEventRow],
    ladder: Sequence[LossThreshold] = DEFAULT_LADDER,
    consistency_tol: float = 1e-3,
) -> HistoricValidationReport:
    """Recompute normalization, percent error and threshold bins for a table.

    Printed multiplier tables are rounded to four decimals, hence the
    default relative consistency tolerance of 1e-3. Bin comparison runs per
    event: combined rows stand for their whole multi-country event, so the
    per-country sub-rows are not binned again.
    """
    checks: list[RowCheck] = []
    for row in rows:
        recomputed = None
        if row.multipliers is not None:
            year = int(row.date[-4:]) if row.date[-4:].isdigit() else 0
            amount = normalize_loss(
                MonetaryAmount(Decimal(repr(row.d_y)), year),
                row.multipliers,
                consistency_tol=consistency_tol,
            )
            recomputed = float(amount.value)
        pct = None
        if row.pct_error is not None and row.predicted is not None:
            pct = (row.predicted - row.d_2012) / row.d_2012 * 100.0
        bins = (None, None)
        if row.pct_error is not None and row.predicted is not None:
            bins = (threshold_bin(row.d_2012, ladder), threshold_bin(row.predicted, ladder))
        checks.append(RowCheck(row, recomputed, pct, bins[0], bins[1]))

    combined_sums: dict[str, tuple[float, float]] = {}
    for row in rows:
        if row.is_combined:
            parts = [
                r for r in rows
                if r.region == row.region and r.date == row.date and not r.is_combined
            ]
            if parts:
                combined_sums[row.region] = (sum(r.d_2012 for r in parts), row.d_2012)
    return HistoricValidationReport(checks=checks, combined_sums=combined_sums)
