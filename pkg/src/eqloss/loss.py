"""City-level losses and their aggregation up the geographic hierarchy.

Region exposure is split onto member cities proportionally to population,
with the division residue assigned to the final city so the shares sum back
to the region amount exactly. City loss is damage ratio times city exposure.
Everything monetary runs in fixed-point decimal (nano-dollar quantum), which
makes the conservation identity city = county = state = country an exact
equality rather than a tolerance.
"""

from __future__ import annotations

from dataclasses import dataclass
from decimal import ROUND_DOWN, ROUND_HALF_EVEN, Decimal
from enum import Enum
from typing import Mapping, Sequence

from .errors import DegenerateRegionError, ReferentialError, ValidationError
from .model import (
    GeoHierarchy,
    GeoLevel,
    MonetaryAmount,
    PopulationCentre,
    REGION_LEVELS,
)

QUANTUM = Decimal("1e-9")


class LineOfBusiness(str, Enum):
    INDUSTRIAL = "industrial"
    PERSONAL = "personal"
    COMMERCIAL = "commercial"
    OTHER = "other"

    @classmethod
    def parse(cls, text: str) -> "LineOfBusiness":
        try:
            return cls(text.strip().lower())
        except ValueError:
            raise ValidationError(f"unknown line of business: {text!r}") from None


@dataclass(frozen=True)
class ExposureRecord:
    """Insured value at risk for one unit and line of business."""

    unit_id: str
    level: GeoLevel
    line_of_business: LineOfBusiness
    gul_exposure: MonetaryAmount
    nfl_exposure: MonetaryAmount

    def __post_init__(self) -> None:
        if self.nfl_exposure.reference_year != self.gul_exposure.reference_year:
            raise ValidationError(f"exposure {self.unit_id}: GUL/NFL reference years differ")
        if self.nfl_exposure.value > self.gul_exposure.value:
            raise ValidationError(
                f"exposure {self.unit_id} ({self.line_of_business.value}): "
                f"NFL {self.nfl_exposure.value} exceeds GUL {self.gul_exposure.value}"
            )


@dataclass(frozen=True)
class LossRecord:
    """GUL/NFL loss for one unit, line of business and alert version."""

    alert: tuple[str, int]
    unit: tuple[GeoLevel, str]
    line_of_business: LineOfBusiness
    gul: MonetaryAmount
    nfl: MonetaryAmount

    def __post_init__(self) -> None:
        if self.nfl.value > self.gul.value:
            raise ValidationError(f"loss at {self.unit[1]}: NFL exceeds GUL")


def _split(total: Decimal, weights: Sequence[int]) -> list[Decimal]:
    """Proportional shares that sum to ``total`` exactly.

    All but the last share are truncated to the quantum; the last absorbs the
    remainder (largest-remainder correction on the final element).
    """
    pop_total = sum(weights)
    if pop_total <= 0:
        raise DegenerateRegionError("total population of member centres is zero")
    shares: list[Decimal] = []
    allocated = Decimal("0")
    for w in weights[:-1]:
        share = (total * w / pop_total).quantize(QUANTUM, rounding=ROUND_DOWN)
        shares.append(share)
        allocated += share
    shares.append(total - allocated)
    return shares


def disaggregate_exposure(
    record: ExposureRecord,
    member_centres: Sequence[PopulationCentre],
) -> dict[str, tuple[MonetaryAmount, MonetaryAmount]]:
    """Split a region exposure record onto member cities by population share.

    Returns centre id -> (gul, nfl). The shares sum to the record amounts
    exactly, and NFL never exceeds GUL at any centre.
    """
    if not member_centres:
        raise DegenerateRegionError(f"region {record.unit_id} has no member centres")
    centres = sorted(member_centres, key=lambda c: c.id)
    weights = [c.population for c in centres]
    gul_shares = _split(record.gul_exposure.value, weights)
    nfl_shares = _split(record.nfl_exposure.value, weights)
    _restore_dominance(gul_shares, nfl_shares)
    year = record.gul_exposure.reference_year
    return {
        c.id: (MonetaryAmount(g, year), MonetaryAmount(n, year))
        for c, g, n in zip(centres, gul_shares, nfl_shares)
    }


def _restore_dominance(gul: list[Decimal], nfl: list[Decimal]) -> None:
    # Truncation keeps nfl_i <= gul_i everywhere except possibly the final
    # remainder element; shift any nano-scale excess onto elements with slack.
    excess = nfl[-1] - gul[-1]
    if excess <= 0:
        return
    nfl[-1] = gul[-1]
    for i in range(len(nfl) - 1):
        slack = gul[i] - nfl[i]
        if slack <= 0:
            continue
        take = min(slack, excess)
        nfl[i] += take
        excess -= take
        if excess == 0:
            return
    raise ValidationError("cannot restore NFL <= GUL; record violates dominance")


def compute_city_loss(
    mdr: float,
    gul_exposure: MonetaryAmount,
    nfl_exposure: MonetaryAmount,
) -> tuple[MonetaryAmount, MonetaryAmount]:
    """Loss = damage ratio x exposure, for both exposure bases."""
    if not 0.0 <= mdr <= 1.0:
        raise ValidationError(f"MDR out of [0, 1]: {mdr}")
    factor = Decimal(repr(mdr))
    year = gul_exposure.reference_year
    gul = (gul_exposure.value * factor).quantize(QUANTUM, rounding=ROUND_HALF_EVEN)
    nfl = (nfl_exposure.value * factor).quantize(QUANTUM, rounding=ROUND_HALF_EVEN)
    return MonetaryAmount(gul, year), MonetaryAmount(nfl, year)


def aggregate_losses(
    city_losses: Mapping[str, tuple[MonetaryAmount, MonetaryAmount]],
    hierarchy: GeoHierarchy,
) -> dict[tuple[GeoLevel, str], tuple[MonetaryAmount, MonetaryAmount]]:
    """Sum city losses into every enclosing region, cities included.

    Raises ReferentialError for a centre that cannot be resolved to a country.
    """
    totals: dict[tuple[GeoLevel, str], tuple[Decimal, Decimal]] = {}
    years = set()
    for cid in sorted(city_losses):
        gul, nfl = city_losses[cid]
        years.add(gul.reference_year)
        if cid not in hierarchy:
            raise ReferentialError(f"centre {cid} is not in the hierarchy")
        centre = hierarchy.centre(cid)
        units = [(GeoLevel.CITY, cid)]
        for level in REGION_LEVELS:
            rid = centre.parent(level)
            if rid is not None:
                units.append((level, rid))
        for key in units:
            g, n = totals.get(key, (Decimal("0"), Decimal("0")))
            totals[key] = (g + gul.value, n + nfl.value)
    if len(years) > 1:
        raise ValidationError(f"mixed reference years in city losses: {sorted(years)}")
    year = years.pop() if years else 0
    return {
        key: (MonetaryAmount(g, year), MonetaryAmount(n, year))
        for key, (g, n) in sorted(totals.items())
    }


@dataclass(frozen=True)
class PortfolioBucket:
    gul_loss: Decimal
    nfl_loss: Decimal
    gul_exposure: Decimal
    nfl_exposure: Decimal


@dataclass(frozen=True)
class PortfolioBreakdown:
    """Loss and exposure totals split by line of business."""

    reference_year: int
    buckets: Mapping[LineOfBusiness, PortfolioBucket]

    def totals(self) -> PortfolioBucket:
        z = Decimal("0")
        g = n = eg = en = z
        for b in self.buckets.values():
            g += b.gul_loss
            n += b.nfl_loss
            eg += b.gul_exposure
            en += b.nfl_exposure
        return PortfolioBucket(g, n, eg, en)


def portfolio_breakdown(
    losses: Sequence[LossRecord],
    exposures: Sequence[ExposureRecord],
) -> PortfolioBreakdown:
    """Group losses and exposures into the four line-of-business buckets.

    Loss records at multiple levels double-count if mixed; pass one level
    (conventionally country rows).
    """
    z = Decimal("0")
    acc = {lob: [z, z, z, z] for lob in LineOfBusiness}
    years = set()
    for rec in losses:
        years.add(rec.gul.reference_year)
        acc[rec.line_of_business][0] += rec.gul.value
        acc[rec.line_of_business][1] += rec.nfl.value
    for exp in exposures:
        years.add(exp.gul_exposure.reference_year)
        acc[exp.line_of_business][2] += exp.gul_exposure.value
        acc[exp.line_of_business][3] += exp.nfl_exposure.value
    if len(years) > 1:
        raise ValidationError(f"mixed reference years in portfolio inputs: {sorted(years)}")
    year = years.pop() if years else 0
    return PortfolioBreakdown(
        reference_year=year,
        buckets={lob: PortfolioBucket(*vals) for lob, vals in acc.items()},
    )
