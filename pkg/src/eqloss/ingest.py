"""Parsers for alert documents, shaking grids, gazetteers and exposure files.

Document formats (all schemas are documented in the README):

* alert XML: a ``pager_event`` element with event attributes and one
  ``city`` row per affected population centre;
* grid XML: a ``grid_specification`` header (bounds and spacing) plus
  whitespace-separated ``lon lat mmi`` rows, mirroring shaking-grid archives;
* gazetteer CSV: ``id,name,lat,lon,population,county_id,state_id,country_id``;
* exposure CSV: ``region_id,level,lob,gul,nfl``.

Parsers are pure and reentrant. Roman-numeral intensities in external data
are converted to integers here, at the boundary; nothing downstream sees
numerals.
"""

from __future__ import annotations

import csv
import xml.etree.ElementTree as ET
from dataclasses import dataclass, field
from datetime import datetime, timezone
from decimal import Decimal
from pathlib import Path

import numpy as np

from .errors import (
    EmptyGridError,
    IntegrityError,
    ParseError,
    ReferentialError,
    SchemaError,
    ValidationError,
)
from .loss import ExposureRecord, LineOfBusiness
from .model import (
    ADMISSION_POPULATION,
    AlertVersion,
    EarthquakeEvent,
    GeoHierarchy,
    GeoLevel,
    MonetaryAmount,
    PopulationCentre,
)

_ROMAN = {
    "I": 1, "II": 2, "III": 3, "IV": 4, "V": 5, "VI": 6,
    "VII": 7, "VIII": 8, "IX": 9, "X": 10, "XI": 11, "XII": 12,
}


@dataclass
class IngestReport:
    """Counters for data dropped or deduplicated during ingestion."""

    low_population_dropped: int = 0
    zero_population_excluded: int = 0
    unresolved_centres: int = 0
    duplicates_ignored: int = 0
    quarantined: int = 0


def parse_mmi(text: str, context: str = "mmi") -> float:
    """Decimal or Roman-numeral intensity, validated into [1, 12]."""
    raw = text.strip()
    value: float
    upper = raw.upper()
    if upper in _ROMAN:
        value = float(_ROMAN[upper])
    else:
        try:
            value = float(raw)
        except ValueError:
            raise SchemaError(context, f"{context}: neither a number nor a Roman numeral: {raw!r}") from None
    if not 1.0 <= value <= 12.0:
        raise SchemaError(context, f"{context}: MMI out of range [I, XII]: {raw!r}")
    return value


def _parse_utc(text: str, field_name: str) -> datetime:
    try:
        ts = datetime.fromisoformat(text.strip().replace("Z", "+00:00"))
    except ValueError:
        raise SchemaError(field_name, f"{field_name}: not an ISO-8601 timestamp: {text!r}") from None
    if ts.tzinfo is None:
        ts = ts.replace(tzinfo=timezone.utc)
    return ts.astimezone(timezone.utc)


def _normalize_name(name: str) -> str:
    out = []
    for ch in name.strip().lower():
        if ch.isalnum():
            out.append(ch)
        elif ch in " -_'/.":
            out.append("-")
    return "".join(out).strip("-")


@dataclass(frozen=True)
class AlertDocument:
    """Parsed alert: event header, alert snapshot and the embedded city rows."""

    event: EarthquakeEvent
    alert: AlertVersion
    cities: tuple[PopulationCentre, ...]


def _attr(elem: ET.Element, name: str, context: str) -> str:
    value = elem.get(name)
    if value is None or not value.strip():
        raise SchemaError(name, f"{context}: missing mandatory field '{name}'")
    return value.strip()


def parse_pager_document(text: str) -> tuple[AlertDocument, IngestReport]:
    """Parse an alert XML document, dropping cities below the admission size."""
    try:
        root = ET.fromstring(text)
    except ET.ParseError as exc:
        line, column = exc.position
        raise ParseError(f"malformed XML: {exc.msg.split(':')[0]}", line, column) from None

    if root.tag != "pager_event":
        raise SchemaError("pager_event", f"expected root element 'pager_event', got '{root.tag}'")

    event_id = _attr(root, "id", "event")
    magnitude = float(_attr(root, "magnitude", "event"))
    origin_time = _parse_utc(_attr(root, "origin_time", "event"), "origin_time")
    version = int(root.get("version", "1"))
    received = root.get("received_time")
    received_time = _parse_utc(received, "received_time") if received else origin_time
    region_name = root.get("region", "")
    lat = float(root.get("lat", "0"))
    lon = float(root.get("lon", "0"))

    report = IngestReport()
    cities: list[PopulationCentre] = []
    city_mmi: dict[str, float] = {}
    for row in root.findall("city"):
        name = _attr(row, "name", "city")
        city_lat = float(_attr(row, "lat", f"city {name}"))
        city_lon = float(_attr(row, "lon", f"city {name}"))
        population = int(_attr(row, "population", f"city {name}"))
        mmi = parse_mmi(_attr(row, "mmi", f"city {name}"), f"city {name} mmi")
        if population < ADMISSION_POPULATION:
            report.low_population_dropped += 1
            continue
        parents: dict[GeoLevel, str] = {}
        for attr_name, level in (("county", GeoLevel.COUNTY), ("state", GeoLevel.STATE), ("country", GeoLevel.COUNTRY)):
            value = row.get(attr_name)
            if value:
                parents[level] = value.strip()
        cid = row.get("id")
        if not cid:
            country = parents.get(GeoLevel.COUNTRY)
            cid = f"{country}/{_normalize_name(name)}" if country else _normalize_name(name)
        if cid in city_mmi:
            raise IntegrityError(f"duplicate city id in alert: {cid}")
        cities.append(
            PopulationCentre(
                id=cid, name=name, latitude=city_lat, longitude=city_lon,
                population=population, parent_ids=parents,
            )
        )
        city_mmi[cid] = mmi

    alert = AlertVersion(
        version=version,
        received_time=received_time,
        magnitude=magnitude,
        epicenter=(lat, lon),
        city_mmi=city_mmi,
    )
    event = EarthquakeEvent(event_id=event_id, region_name=region_name, origin_time=origin_time)
    return AlertDocument(event=event, alert=alert, cities=tuple(cities)), report


def parse_pager_event(text: str) -> tuple[EarthquakeEvent, AlertVersion]:
    """Event header and alert snapshot from an alert XML document."""
    doc, _ = parse_pager_document(text)
    return doc.event, doc.alert


# -- shaking grids ---------------------------------------------------------


@dataclass(frozen=True)
class ShakeGrid:
    """Regular lattice of (lat, lon, MMI) points with declared bounds."""

    event_id: str
    points: tuple[tuple[float, float, float], ...]
    bounds: tuple[float, float, float, float]  # lat_min, lat_max, lon_min, lon_max
    spacing: float

    def __post_init__(self) -> None:
        lat_min, lat_max, lon_min, lon_max = self.bounds
        if not self.points:
            raise EmptyGridError(f"grid for {self.event_id} has no points")
        if self.spacing <= 0:
            raise IntegrityError("grid spacing must be positive")
        for lat, lon, mmi in self.points:
            if not (lat_min <= lat <= lat_max and lon_min <= lon <= lon_max):
                raise IntegrityError(f"grid point ({lat}, {lon}) outside declared bounds")
            if not 1.0 <= mmi <= 12.0:
                raise IntegrityError(f"grid MMI out of [1, 12]: {mmi}")
        rows = round((lat_max - lat_min) / self.spacing) + 1
        cols = round((lon_max - lon_min) / self.spacing) + 1
        if len(self.points) != rows * cols:
            raise IntegrityError(
                f"grid for {self.event_id}: {len(self.points)} points, "
                f"but bounds and spacing imply {rows} x {cols}"
            )

    def contains(self, latitude: float, longitude: float) -> bool:
        lat_min, lat_max, lon_min, lon_max = self.bounds
        return lat_min <= latitude <= lat_max and lon_min <= longitude <= lon_max


def parse_shakemap_grid(text: str) -> ShakeGrid:
    """Parse a shaking-grid XML document into a validated ShakeGrid."""
    try:
        root = ET.fromstring(text)
    except ET.ParseError as exc:
        line, column = exc.position
        raise ParseError(f"malformed XML: {exc.msg.split(':')[0]}", line, column) from None
    event_id = root.get("event_id", "")
    spec = root.find("grid_specification")
    if spec is None:
        raise SchemaError("grid_specification", "grid document lacks a grid_specification element")
    bounds = (
        float(_attr(spec, "lat_min", "grid_specification")),
        float(_attr(spec, "lat_max", "grid_specification")),
        float(_attr(spec, "lon_min", "grid_specification")),
        float(_attr(spec, "lon_max", "grid_specification")),
    )
    spacing = float(_attr(spec, "spacing", "grid_specification"))
    data = root.find("grid_data")
    body = (data.text or "") if data is not None else ""
    points: list[tuple[float, float, float]] = []
    for line_no, line in enumerate(body.splitlines(), start=1):
        line = line.strip()
        if not line:
            continue
        parts = line.split()
        if len(parts) != 3:
            raise ParseError(f"grid row must be 'lon lat mmi', got {line!r}", line_no, 1)
        lon, lat, mmi = (float(p) for p in parts)
        points.append((lat, lon, mmi))
    if not points:
        raise EmptyGridError(f"grid for {event_id or '<unknown>'} has no points")
    return ShakeGrid(event_id=event_id, points=tuple(points), bounds=bounds, spacing=spacing)


# -- gazetteer -------------------------------------------------------------


@dataclass(frozen=True)
class Gazetteer:
    """Admitted population centres (unique ids, population above the floor)."""

    centres: tuple[PopulationCentre, ...] = field(default_factory=tuple)

    def __post_init__(self) -> None:
        seen = set()
        for c in self.centres:
            if c.id in seen:
                raise IntegrityError(f"duplicate centre id in gazetteer: {c.id}")
            seen.add(c.id)
            if c.population < ADMISSION_POPULATION:
                raise ValidationError(f"centre {c.id} below admission population: {c.population}")


def load_gazetteer(path: str | Path, report: IngestReport | None = None) -> Gazetteer:
    """Read a gazetteer CSV, excluding zero-population rows (counted, not guessed)
    and rows under the admission floor."""
    report = report if report is not None else IngestReport()
    centres: list[PopulationCentre] = []
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.DictReader(fh)
        required = {"id", "name", "lat", "lon", "population", "county_id", "state_id", "country_id"}
        if reader.fieldnames is None or not required.issubset(reader.fieldnames):
            raise ValidationError(f"{path}: expected header id,name,lat,lon,population,county_id,state_id,country_id")
        for row in reader:
            population = int(row["population"])
            if population == 0:
                report.zero_population_excluded += 1
                continue
            if population < ADMISSION_POPULATION:
                report.low_population_dropped += 1
                continue
            parents: dict[GeoLevel, str] = {}
            for key, level in (("county_id", GeoLevel.COUNTY), ("state_id", GeoLevel.STATE), ("country_id", GeoLevel.COUNTRY)):
                value = (row.get(key) or "").strip()
                if value:
                    parents[level] = value
            centres.append(
                PopulationCentre(
                    id=row["id"].strip(),
                    name=row["name"].strip(),
                    latitude=float(row["lat"]),
                    longitude=float(row["lon"]),
                    population=population,
                    parent_ids=parents,
                )
            )
    return Gazetteer(centres=tuple(centres))


# -- affected-city extraction ----------------------------------------------


def extract_affected_cities(grid: ShakeGrid, gazetteer: Gazetteer) -> dict[str, float]:
    """Assign each in-bounds centre the MMI of its nearest grid point.

    Distance is Euclidean in (lat, lon) degrees; ties resolve to the grid
    point with the lower (lat, lon) in lexicographic order. Centres outside
    the grid bounds are excluded.
    """
    pts = np.asarray(grid.points, dtype=float)  # columns: lat, lon, mmi
    out: dict[str, float] = {}
    for centre in gazetteer.centres:
        if not grid.contains(centre.latitude, centre.longitude):
            continue
        d_lat = pts[:, 0] - centre.latitude
        d_lon = pts[:, 1] - centre.longitude
        dist2 = d_lat * d_lat + d_lon * d_lon
        best = np.min(dist2)
        tied = np.nonzero(dist2 == best)[0]
        if len(tied) > 1:
            order = np.lexsort((pts[tied, 1], pts[tied, 0]))
            winner = tied[order[0]]
        else:
            winner = tied[0]
        out[centre.id] = float(pts[winner, 2])
    return out


# -- exposure ----------------------------------------------------------------


def ingest_exposure(
    path: str | Path,
    hierarchy: GeoHierarchy | None = None,
    reference_year: int = 2012,
) -> list[ExposureRecord]:
    """Read exposure rows, enforcing NFL <= GUL and (optionally) that every
    unit id exists in the hierarchy."""
    records: list[ExposureRecord] = []
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.DictReader(fh)
        required = {"region_id", "level", "lob", "gul", "nfl"}
        if reader.fieldnames is None or not required.issubset(reader.fieldnames):
            raise ValidationError(f"{path}: expected header region_id,level,lob,gul,nfl")
        for row in reader:
            unit_id = row["region_id"].strip()
            level = GeoLevel.parse(row["level"])
            gul = Decimal(row["gul"].strip())
            nfl = Decimal(row["nfl"].strip())
            if nfl > gul:
                raise ValidationError(f"exposure {unit_id}: NFL {nfl} exceeds GUL {gul}")
            if hierarchy is not None and not hierarchy.has_unit(unit_id):
                raise ReferentialError(f"exposure references unknown unit: {unit_id}")
            records.append(
                ExposureRecord(
                    unit_id=unit_id,
                    level=level,
                    line_of_business=LineOfBusiness.parse(row["lob"]),
                    gul_exposure=MonetaryAmount(gul, reference_year),
                    nfl_exposure=MonetaryAmount(nfl, reference_year),
                )
            )
    return records
