"""Core domain model: geographic hierarchy, events, alerts and money.

All values here are immutable after construction and safe to share between
concurrent readers. Monetary values use ``decimal.Decimal`` so that the loss
pipeline can keep sums exactly conservative; intensities stay as floats.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from datetime import datetime, timezone
from decimal import Decimal
from enum import IntEnum
from typing import Iterable, Iterator, Mapping

from .errors import IntegrityError, ValidationError

MMI_MIN = 1.0
MMI_MAX = 12.0

#: Minimum population for a centre to be admitted to computation.
ADMISSION_POPULATION = 1000


class GeoLevel(IntEnum):
    """Geographic levels with the total order city < county < state < country."""

    CITY = 1
    COUNTY = 2
    STATE = 3
    COUNTRY = 4

    @property
    def label(self) -> str:
        return self.name.lower()

    @classmethod
    def parse(cls, text: str) -> "GeoLevel":
        t = text.strip().lower()
        by_label = {lv.label: lv for lv in cls}
        if t in by_label:
            return by_label[t]
        if len(t) == 2 and t[0] == "l" and t[1] in "1234":
            return cls(int(t[1]))
        raise ValidationError(f"unknown geographic level: {text!r}")


#: Levels that denote regions (everything above the city/point level).
REGION_LEVELS = (GeoLevel.COUNTY, GeoLevel.STATE, GeoLevel.COUNTRY)


def _check_coords(latitude: float, longitude: float) -> None:
    if not -90.0 <= latitude <= 90.0:
        raise ValidationError(f"latitude out of range: {latitude}")
    if not -180.0 <= longitude <= 180.0:
        raise ValidationError(f"longitude out of range: {longitude}")


@dataclass(frozen=True)
class PopulationCentre:
    """A city: point-mass population at a coordinate, with its parent regions.

    ``parent_ids`` maps COUNTY/STATE/COUNTRY to region ids. The country is
    mandatory for admitted centres; county and state may be absent for
    jurisdictions that lack that level.
    """

    id: str
    name: str
    latitude: float
    longitude: float
    population: int
    parent_ids: Mapping[GeoLevel, str] = field(default_factory=dict)

    def __post_init__(self) -> None:
        _check_coords(self.latitude, self.longitude)
        if self.population < 0:
            raise ValidationError(f"centre {self.id}: negative population")
        for level in self.parent_ids:
            if level == GeoLevel.CITY:
                raise ValidationError(f"centre {self.id}: a city cannot be its own parent level")

    def parent(self, level: GeoLevel) -> str | None:
        if level == GeoLevel.CITY:
            raise ValidationError("parent lookup requires a region level (county/state/country)")
        return self.parent_ids.get(level)


def parent_of(centre: PopulationCentre, level: GeoLevel) -> str | None:
    """Region id containing ``centre`` at ``level``, or None if that level is absent."""
    return centre.parent(level)


@dataclass(frozen=True)
class Region:
    """A county, state or country with an aggregate population.

    ``population_source`` records whether the population was summed from
    member centres or ingested as an independent census figure; the two are
    never mixed within one computation.
    """

    id: str
    level: GeoLevel
    name: str
    population: int
    geometry_ref: str | None = None
    static_indicators: Mapping[str, float] = field(default_factory=dict)
    population_source: str = "centres"

    def __post_init__(self) -> None:
        if self.level not in REGION_LEVELS:
            raise ValidationError(f"region {self.id}: level must be county/state/country")
        if self.population < 0:
            raise ValidationError(f"region {self.id}: negative population")
        if self.population_source not in ("centres", "census"):
            raise ValidationError(f"region {self.id}: unknown population source")


def _as_utc(ts: datetime) -> datetime:
    if ts.tzinfo is None:
        return ts.replace(tzinfo=timezone.utc)
    return ts.astimezone(timezone.utc)


@dataclass(frozen=True)
class AlertVersion:
    """One timestamped snapshot of an evolving event.

    ``city_mmi`` maps centre ids to intensities in [1, 12].
    """

    version: int
    received_time: datetime
    magnitude: float
    epicenter: tuple[float, float]
    city_mmi: Mapping[str, float] = field(default_factory=dict)

    def __post_init__(self) -> None:
        if self.version < 1:
            raise ValidationError(f"alert version must be positive, got {self.version}")
        _check_coords(*self.epicenter)
        object.__setattr__(self, "received_time", _as_utc(self.received_time))
        for cid, mmi in self.city_mmi.items():
            if not MMI_MIN <= mmi <= MMI_MAX:
                raise ValidationError(f"MMI for centre {cid} out of [1, 12]: {mmi}")


@dataclass(frozen=True)
class EarthquakeEvent:
    """Event header plus its ordered alert history."""

    event_id: str
    region_name: str
    origin_time: datetime
    alerts: tuple[AlertVersion, ...] = ()

    def __post_init__(self) -> None:
        object.__setattr__(self, "origin_time", _as_utc(self.origin_time))
        prev: AlertVersion | None = None
        for alert in self.alerts:
            if prev is not None:
                if alert.version <= prev.version:
                    raise IntegrityError(
                        f"event {self.event_id}: alert versions must strictly increase "
                        f"({prev.version} then {alert.version})"
                    )
                if alert.received_time < prev.received_time:
                    raise IntegrityError(
                        f"event {self.event_id}: received times must be non-decreasing"
                    )
            prev = alert

    def with_alert(self, alert: AlertVersion) -> "EarthquakeEvent":
        """Return a copy with ``alert`` appended, enforcing ordering."""
        return EarthquakeEvent(self.event_id, self.region_name, self.origin_time, self.alerts + (alert,))


@dataclass(frozen=True)
class MonetaryAmount:
    """A non-negative USD amount tagged with the calendar year it is stated in.

    Arithmetic between amounts requires equal reference years; normalization
    is the only place years change.
    """

    value: Decimal
    reference_year: int

    def __post_init__(self) -> None:
        if not isinstance(self.value, Decimal):
            object.__setattr__(self, "value", Decimal(str(self.value)))
        if self.value < 0:
            raise ValidationError(f"monetary amount must be non-negative, got {self.value}")

    def __add__(self, other: "MonetaryAmount") -> "MonetaryAmount":
        if not isinstance(other, MonetaryAmount):
            return NotImplemented
        if other.reference_year != self.reference_year:
            raise ValidationError(
                f"cannot add amounts from different reference years "
                f"({self.reference_year} vs {other.reference_year})"
            )
        return MonetaryAmount(self.value + other.value, self.reference_year)

    def times(self, factor: Decimal | int) -> "MonetaryAmount":
        """Scale by an exact factor (no year change)."""
        if not isinstance(factor, (Decimal, int)):
            raise ValidationError("scale factor must be Decimal or int; convert floats explicitly")
        return MonetaryAmount(self.value * Decimal(factor), self.reference_year)

    @classmethod
    def zero(cls, reference_year: int) -> "MonetaryAmount":
        return cls(Decimal("0"), reference_year)


class GeoHierarchy:
    """Containment model over a set of admitted population centres.

    Region membership, region parents and region populations are all derived
    from the centres so that geographic joins stay consistent: a county's
    parent state is whatever its member centres agree on, and disagreement is
    rejected at construction.
    """

    def __init__(self, centres: Iterable[PopulationCentre]):
        self._centres: dict[str, PopulationCentre] = {}
        for c in centres:
            if c.id in self._centres:
                raise IntegrityError(f"duplicate centre id: {c.id}")
            if c.parent(GeoLevel.COUNTRY) is None:
                raise IntegrityError(f"centre {c.id} has no country; cannot admit")
            self._centres[c.id] = c

        self._region_level: dict[str, GeoLevel] = {}
        self._region_parent: dict[str, str | None] = {}
        self._members: dict[str, list[str]] = {}
        self._build()

    def _build(self) -> None:
        for cid, c in sorted(self._centres.items()):
            chain = [(lv, c.parent(lv)) for lv in REGION_LEVELS]
            present = [(lv, rid) for lv, rid in chain if rid is not None]
            # every region in the chain gets this centre as a member
            for lv, rid in present:
                known = self._region_level.get(rid)
                if known is not None and known != lv:
                    raise IntegrityError(f"region id {rid} used at two levels ({known.label}, {lv.label})")
                self._region_level[rid] = lv
                self._members.setdefault(rid, []).append(cid)
            # parent of each region = the next present level upward
            for i, (lv, rid) in enumerate(present):
                parent = present[i + 1][1] if i + 1 < len(present) else None
                if rid in self._region_parent and self._region_parent[rid] != parent:
                    raise IntegrityError(
                        f"region {rid} has conflicting parents "
                        f"({self._region_parent[rid]} vs {parent})"
                    )
                self._region_parent[rid] = parent

    # -- centres ---------------------------------------------------------

    def __contains__(self, centre_id: str) -> bool:
        return centre_id in self._centres

    def __len__(self) -> int:
        return len(self._centres)

    def centres(self) -> Iterator[PopulationCentre]:
        for cid in sorted(self._centres):
            yield self._centres[cid]

    def centre(self, centre_id: str) -> PopulationCentre:
        try:
            return self._centres[centre_id]
        except KeyError:
            raise IntegrityError(f"unknown centre: {centre_id}") from None

    def country_of(self, centre_id: str) -> str:
        parent = self.centre(centre_id).parent(GeoLevel.COUNTRY)
        assert parent is not None  # enforced at construction
        return parent

    # -- regions ---------------------------------------------------------

    def has_unit(self, unit_id: str) -> bool:
        return unit_id in self._centres or unit_id in self._region_level

    def region_ids(self, level: GeoLevel) -> list[str]:
        return sorted(r for r, lv in self._region_level.items() if lv == level)

    def region_level(self, region_id: str) -> GeoLevel:
        try:
            return self._region_level[region_id]
        except KeyError:
            raise IntegrityError(f"unknown region: {region_id}") from None

    def region_parent(self, region_id: str) -> str | None:
        """Containing region at the next present level, None for countries."""
        self.region_level(region_id)
        return self._region_parent[region_id]

    def members(self, region_id: str) -> list[str]:
        """Ids of all member centres of a region, sorted."""
        self.region_level(region_id)
        return list(self._members[region_id])

    def region(self, region_id: str) -> Region:
        level = self.region_level(region_id)
        population = sum(self._centres[cid].population for cid in self._members[region_id])
        name = region_id.rsplit("/", 1)[-1]
        return Region(id=region_id, level=level, name=name, population=population)

    def country_of_unit(self, unit_id: str) -> str:
        """Country id containing any unit (centre or region)."""
        if unit_id in self._centres:
            return self.country_of(unit_id)
        rid: str | None = unit_id
        while rid is not None and self.region_level(rid) != GeoLevel.COUNTRY:
            rid = self.region_parent(rid)
        if rid is None:
            raise IntegrityError(f"unit {unit_id} has no country ancestor")
        return rid
