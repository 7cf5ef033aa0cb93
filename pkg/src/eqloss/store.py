"""Embedded persistent store for exposure, events, hazard and losses.

Seven tables back the pipeline and the HTTP service:

    t1_exposure_gul   unit-level Ground-Up exposure per line of business
    t2_exposure_nfl   unit-level Net-of-Facultative exposure
    t3_events         event headers and per-alert snapshots with totals
    t4_indicators     per-alert, per-unit indicator values (MMI/MDR/GUL/NFL)
    t5_geo            centres, regions and static indicators
    t6_mdr            damage-ratio curves
    t7_losses         per-alert, per-unit, per-line losses

Backed by sqlite (single file, or in-memory for tests). Writes for one
(event, version) are atomic: either every row lands or none does, and a
re-put replaces the previous rows so archive replays stay idempotent.
Monetary values are persisted as exact decimal strings.
"""

from __future__ import annotations

import csv
import functools
import sqlite3
import threading
from dataclasses import dataclass
from decimal import Decimal
from pathlib import Path
from typing import Mapping, Sequence

from .errors import NotFoundError, ReferentialError
from .hazard import HazardField
from .loss import ExposureRecord, LineOfBusiness, LossRecord
from .model import (
    AlertVersion,
    EarthquakeEvent,
    GeoHierarchy,
    GeoLevel,
    MonetaryAmount,
    PopulationCentre,
)
from .vulnerability import MdrCurve

_SCHEMA = """
CREATE TABLE IF NOT EXISTS t1_exposure_gul (
    unit_id TEXT NOT NULL, level INTEGER NOT NULL, lob TEXT NOT NULL,
    value TEXT NOT NULL, year INTEGER NOT NULL,
    PRIMARY KEY (unit_id, lob)
);
CREATE TABLE IF NOT EXISTS t2_exposure_nfl (
    unit_id TEXT NOT NULL, level INTEGER NOT NULL, lob TEXT NOT NULL,
    value TEXT NOT NULL, year INTEGER NOT NULL,
    PRIMARY KEY (unit_id, lob)
);
CREATE TABLE IF NOT EXISTS t3_events (
    event_id TEXT PRIMARY KEY, region_name TEXT NOT NULL, origin_time TEXT NOT NULL
);
CREATE TABLE IF NOT EXISTS t3_alerts (
    event_id TEXT NOT NULL, version INTEGER NOT NULL,
    received_time TEXT NOT NULL, magnitude REAL NOT NULL,
    epi_lat REAL NOT NULL, epi_lon REAL NOT NULL,
    total_gul TEXT NOT NULL, total_nfl TEXT NOT NULL, year INTEGER NOT NULL,
    PRIMARY KEY (event_id, version)
);
CREATE TABLE IF NOT EXISTS t4_indicators (
    event_id TEXT NOT NULL, version INTEGER NOT NULL,
    level INTEGER NOT NULL, unit_id TEXT NOT NULL,
    indicator TEXT NOT NULL, value TEXT NOT NULL,
    PRIMARY KEY (event_id, version, level, unit_id, indicator)
);
CREATE TABLE IF NOT EXISTS t5_centres (
    id TEXT PRIMARY KEY, name TEXT NOT NULL, lat REAL NOT NULL, lon REAL NOT NULL,
    population INTEGER NOT NULL, county_id TEXT, state_id TEXT, country_id TEXT NOT NULL
);
CREATE TABLE IF NOT EXISTS t5_regions (
    id TEXT PRIMARY KEY, level INTEGER NOT NULL, name TEXT NOT NULL,
    population INTEGER NOT NULL, population_source TEXT NOT NULL
);
CREATE TABLE IF NOT EXISTS t5_static (
    unit_id TEXT NOT NULL, name TEXT NOT NULL, value REAL NOT NULL,
    PRIMARY KEY (unit_id, name)
);
CREATE TABLE IF NOT EXISTS t6_mdr (
    country TEXT NOT NULL, mmi INTEGER NOT NULL, mdr REAL NOT NULL,
    PRIMARY KEY (country, mmi)
);
CREATE TABLE IF NOT EXISTS t7_losses (
    event_id TEXT NOT NULL, version INTEGER NOT NULL,
    level INTEGER NOT NULL, unit_id TEXT NOT NULL, lob TEXT NOT NULL,
    gul TEXT NOT NULL, nfl TEXT NOT NULL, year INTEGER NOT NULL,
    PRIMARY KEY (event_id, version, level, unit_id, lob)
);
"""

TABLE_NAMES = (
    "t1_exposure_gul", "t2_exposure_nfl", "t3_events", "t3_alerts",
    "t4_indicators", "t5_centres", "t5_regions", "t5_static", "t6_mdr", "t7_losses",
)


@dataclass(frozen=True)
class AlertSummary:
    event_id: str
    version: int
    received_time: str
    magnitude: float
    epicenter: tuple[float, float]
    total_gul: Decimal
    total_nfl: Decimal
    year: int


@dataclass(frozen=True)
class EventSummary:
    event_id: str
    region_name: str
    origin_time: str
    alert_count: int


def _locked(method):
    """Serialize connection access across request threads."""

    @functools.wraps(method)
    def wrapper(self, *args, **kwargs):
        with self._lock:
            return method(self, *args, **kwargs)

    return wrapper


class ElevDb:
    """The pipeline's table store. One logical writer per event id."""

    def __init__(self, path: str | Path = ":memory:"):
        self.path = str(path)
        # one connection shared across request threads; _lock serializes access
        self._conn = sqlite3.connect(self.path, check_same_thread=False)
        self._lock = threading.RLock()
        if self.path != ":memory:":
            self._conn.execute("PRAGMA journal_mode=WAL")
        self._conn.executescript(_SCHEMA)
        self._conn.commit()

    def close(self) -> None:
        self._conn.close()

    # -- geographic info (t5) -------------------------------------------

    @_locked
    def load_hierarchy(self, hierarchy: GeoHierarchy) -> None:
        cur = self._conn.cursor()
        try:
            for c in hierarchy.centres():
                cur.execute(
                    "INSERT OR REPLACE INTO t5_centres VALUES (?,?,?,?,?,?,?,?)",
                    (
                        c.id, c.name, c.latitude, c.longitude, c.population,
                        c.parent(GeoLevel.COUNTY), c.parent(GeoLevel.STATE), c.parent(GeoLevel.COUNTRY),
                    ),
                )
            for level in (GeoLevel.COUNTY, GeoLevel.STATE, GeoLevel.COUNTRY):
                for rid in hierarchy.region_ids(level):
                    region = hierarchy.region(rid)
                    cur.execute(
                        "INSERT OR REPLACE INTO t5_regions VALUES (?,?,?,?,?)",
                        (region.id, int(region.level), region.name, region.population, region.population_source),
                    )
            self._conn.commit()
        except Exception:
            self._conn.rollback()
            raise

    @_locked
    def hierarchy(self) -> GeoHierarchy:
        rows = self._conn.execute(
            "SELECT id, name, lat, lon, population, county_id, state_id, country_id FROM t5_centres"
        ).fetchall()
        centres = []
        for cid, name, lat, lon, population, county, state, country in rows:
            parents = {}
            if county:
                parents[GeoLevel.COUNTY] = county
            if state:
                parents[GeoLevel.STATE] = state
            if country:
                parents[GeoLevel.COUNTRY] = country
            centres.append(
                PopulationCentre(id=cid, name=name, latitude=lat, longitude=lon,
                                 population=population, parent_ids=parents)
            )
        return GeoHierarchy(centres)

    @_locked
    def unit_exists(self, unit_id: str) -> bool:
        row = self._conn.execute("SELECT 1 FROM t5_centres WHERE id=?", (unit_id,)).fetchone()
        if row:
            return True
        return self._conn.execute("SELECT 1 FROM t5_regions WHERE id=?", (unit_id,)).fetchone() is not None

    @_locked
    def put_static(self, unit_id: str, indicators: Mapping[str, float]) -> None:
        if not self.unit_exists(unit_id):
            raise ReferentialError(f"static indicators reference unknown unit: {unit_id}")
        cur = self._conn.cursor()
        for name in sorted(indicators):
            cur.execute("INSERT OR REPLACE INTO t5_static VALUES (?,?,?)", (unit_id, name, indicators[name]))
        self._conn.commit()

    @_locked
    def static_indicators(self, unit_id: str) -> dict[str, float]:
        if not self.unit_exists(unit_id):
            raise NotFoundError(f"unknown unit: {unit_id}")
        rows = self._conn.execute(
            "SELECT name, value FROM t5_static WHERE unit_id=? ORDER BY name", (unit_id,)
        ).fetchall()
        return {name: value for name, value in rows}

    # -- exposure (t1/t2) -------------------------------------------------

    @_locked
    def put_exposure(self, records: Sequence[ExposureRecord]) -> None:
        for rec in records:
            if not self.unit_exists(rec.unit_id):
                raise ReferentialError(f"exposure references unknown unit: {rec.unit_id}")
        cur = self._conn.cursor()
        try:
            for rec in records:
                cur.execute(
                    "INSERT OR REPLACE INTO t1_exposure_gul VALUES (?,?,?,?,?)",
                    (rec.unit_id, int(rec.level), rec.line_of_business.value,
                     str(rec.gul_exposure.value), rec.gul_exposure.reference_year),
                )
                cur.execute(
                    "INSERT OR REPLACE INTO t2_exposure_nfl VALUES (?,?,?,?,?)",
                    (rec.unit_id, int(rec.level), rec.line_of_business.value,
                     str(rec.nfl_exposure.value), rec.nfl_exposure.reference_year),
                )
            self._conn.commit()
        except Exception:
            self._conn.rollback()
            raise

    @_locked
    def exposure_records(self) -> list[ExposureRecord]:
        gul_rows = self._conn.execute(
            "SELECT unit_id, level, lob, value, year FROM t1_exposure_gul ORDER BY unit_id, lob"
        ).fetchall()
        nfl = {
            (unit, lob): (value, year)
            for unit, _, lob, value, year in self._conn.execute(
                "SELECT unit_id, level, lob, value, year FROM t2_exposure_nfl"
            ).fetchall()
        }
        records = []
        for unit, level, lob, value, year in gul_rows:
            nfl_value, nfl_year = nfl[(unit, lob)]
            records.append(
                ExposureRecord(
                    unit_id=unit,
                    level=GeoLevel(level),
                    line_of_business=LineOfBusiness(lob),
                    gul_exposure=MonetaryAmount(Decimal(value), year),
                    nfl_exposure=MonetaryAmount(Decimal(nfl_value), nfl_year),
                )
            )
        return records

    # -- curves (t6) -------------------------------------------------------

    @_locked
    def put_curves(self, curves: Mapping[str, MdrCurve]) -> None:
        cur = self._conn.cursor()
        for country in sorted(curves):
            cur.execute("DELETE FROM t6_mdr WHERE country=?", (country,))
            for mmi in sorted(curves[country].entries):
                cur.execute("INSERT INTO t6_mdr VALUES (?,?,?)", (country, mmi, curves[country].entries[mmi]))
        self._conn.commit()

    @_locked
    def curves(self) -> dict[str, MdrCurve]:
        rows = self._conn.execute("SELECT country, mmi, mdr FROM t6_mdr ORDER BY country, mmi").fetchall()
        acc: dict[str, dict[int, float]] = {}
        for country, mmi, mdr in rows:
            acc.setdefault(country, {})[mmi] = mdr
        return {c: MdrCurve(c, entries) for c, entries in acc.items()}

    # -- alert results (t3/t4/t7) -------------------------------------------

    @_locked
    def alert_exists(self, event_id: str, version: int) -> bool:
        return (
            self._conn.execute(
                "SELECT 1 FROM t3_alerts WHERE event_id=? AND version=?", (event_id, version)
            ).fetchone()
            is not None
        )

    @_locked
    def put_alert_results(
        self,
        event: EarthquakeEvent,
        alert: AlertVersion,
        hazard: HazardField,
        mdr_values: Mapping[tuple[GeoLevel, str], float],
        losses: Sequence[LossRecord],
        totals: tuple[MonetaryAmount, MonetaryAmount],
    ) -> str:
        """Atomically write one alert's results; replaces any previous rows.

        Returns a commit token (event/version) once every row is visible.
        """
        for level, unit_id in set(hazard.values) | set(mdr_values) | {r.unit for r in losses}:
            if not self.unit_exists(unit_id):
                raise ReferentialError(f"alert results reference unknown unit: {unit_id}")

        cur = self._conn.cursor()
        try:
            # the first DML statement opens the transaction; commit() seals it
            cur.execute(
                "INSERT OR REPLACE INTO t3_events VALUES (?,?,?)",
                (event.event_id, event.region_name, event.origin_time.isoformat()),
            )
            cur.execute(
                "DELETE FROM t3_alerts WHERE event_id=? AND version=?", (event.event_id, alert.version)
            )
            cur.execute(
                "DELETE FROM t4_indicators WHERE event_id=? AND version=?", (event.event_id, alert.version)
            )
            cur.execute(
                "DELETE FROM t7_losses WHERE event_id=? AND version=?", (event.event_id, alert.version)
            )
            gul_total, nfl_total = totals
            cur.execute(
                "INSERT INTO t3_alerts VALUES (?,?,?,?,?,?,?,?,?)",
                (
                    event.event_id, alert.version, alert.received_time.isoformat(),
                    alert.magnitude, alert.epicenter[0], alert.epicenter[1],
                    str(gul_total.value), str(nfl_total.value), gul_total.reference_year,
                ),
            )
            self._write_indicators(cur, event.event_id, alert.version, hazard, mdr_values, losses)
            self._write_losses(cur, event.event_id, alert.version, losses)
            self._conn.commit()
        except Exception:
            self._conn.rollback()
            raise
        return f"{event.event_id}/{alert.version}"

    def _write_indicators(
        self,
        cur: sqlite3.Cursor,
        event_id: str,
        version: int,
        hazard: HazardField,
        mdr_values: Mapping[tuple[GeoLevel, str], float],
        losses: Sequence[LossRecord],
    ) -> None:
        for (level, unit_id), value in sorted(hazard.values.items()):
            cur.execute(
                "INSERT INTO t4_indicators VALUES (?,?,?,?,?,?)",
                (event_id, version, int(level), unit_id, "MMI", repr(value)),
            )
        for (level, unit_id), value in sorted(mdr_values.items()):
            cur.execute(
                "INSERT INTO t4_indicators VALUES (?,?,?,?,?,?)",
                (event_id, version, int(level), unit_id, "MDR", repr(value)),
            )
        # all-line loss indicators per unit
        by_unit: dict[tuple[GeoLevel, str], tuple[Decimal, Decimal]] = {}
        for rec in losses:
            g, n = by_unit.get(rec.unit, (Decimal("0"), Decimal("0")))
            by_unit[rec.unit] = (g + rec.gul.value, n + rec.nfl.value)
        for (level, unit_id), (g, n) in sorted(by_unit.items()):
            cur.execute(
                "INSERT INTO t4_indicators VALUES (?,?,?,?,?,?)",
                (event_id, version, int(level), unit_id, "GUL", str(g)),
            )
            cur.execute(
                "INSERT INTO t4_indicators VALUES (?,?,?,?,?,?)",
                (event_id, version, int(level), unit_id, "NFL", str(n)),
            )

    def _write_losses(self, cur: sqlite3.Cursor, event_id: str, version: int, losses: Sequence[LossRecord]) -> None:
        for rec in sorted(losses, key=lambda r: (int(r.unit[0]), r.unit[1], r.line_of_business.value)):
            cur.execute(
                "INSERT INTO t7_losses VALUES (?,?,?,?,?,?,?,?)",
                (
                    event_id, version, int(rec.unit[0]), rec.unit[1], rec.line_of_business.value,
                    str(rec.gul.value), str(rec.nfl.value), rec.gul.reference_year,
                ),
            )

    # -- queries -----------------------------------------------------------

    @_locked
    def list_events(self) -> list[EventSummary]:
        rows = self._conn.execute(
            "SELECT e.event_id, e.region_name, e.origin_time,"
            " (SELECT COUNT(*) FROM t3_alerts a WHERE a.event_id = e.event_id)"
            " FROM t3_events e ORDER BY e.origin_time, e.event_id"
        ).fetchall()
        return [EventSummary(*row) for row in rows]

    @_locked
    def list_alerts(self, event_id: str) -> list[AlertSummary]:
        if self._conn.execute("SELECT 1 FROM t3_events WHERE event_id=?", (event_id,)).fetchone() is None:
            raise NotFoundError(f"unknown event: {event_id}")
        rows = self._conn.execute(
            "SELECT event_id, version, received_time, magnitude, epi_lat, epi_lon, total_gul, total_nfl, year"
            " FROM t3_alerts WHERE event_id=? ORDER BY version",
            (event_id,),
        ).fetchall()
        return [
            AlertSummary(
                event_id=eid, version=v, received_time=rt, magnitude=mag,
                epicenter=(lat, lon), total_gul=Decimal(g), total_nfl=Decimal(n), year=year,
            )
            for eid, v, rt, mag, lat, lon, g, n, year in rows
        ]

    @_locked
    def require_alert(self, event_id: str, version: int) -> None:
        if not self.alert_exists(event_id, version):
            raise NotFoundError(f"unknown alert: {event_id} version {version}")

    @_locked
    def query_losses(
        self,
        event_id: str,
        version: int,
        level: GeoLevel,
        line_of_business: LineOfBusiness | None = None,
    ) -> list[LossRecord]:
        self.require_alert(event_id, version)
        sql = (
            "SELECT unit_id, lob, gul, nfl, year FROM t7_losses"
            " WHERE event_id=? AND version=? AND level=?"
        )
        params: list = [event_id, version, int(level)]
        if line_of_business is not None:
            sql += " AND lob=?"
            params.append(line_of_business.value)
        sql += " ORDER BY unit_id, lob"
        rows = self._conn.execute(sql, params).fetchall()
        return [
            LossRecord(
                alert=(event_id, version),
                unit=(level, unit_id),
                line_of_business=LineOfBusiness(lob),
                gul=MonetaryAmount(Decimal(g), year),
                nfl=MonetaryAmount(Decimal(n), year),
            )
            for unit_id, lob, g, n, year in rows
        ]

    @_locked
    def query_indicators(
        self, event_id: str, version: int, level: GeoLevel, indicator: str | None = None
    ) -> dict[str, dict[str, str]]:
        """unit id -> {indicator name -> stored value string}."""
        self.require_alert(event_id, version)
        sql = "SELECT unit_id, indicator, value FROM t4_indicators WHERE event_id=? AND version=? AND level=?"
        params: list = [event_id, version, int(level)]
        if indicator is not None:
            sql += " AND indicator=?"
            params.append(indicator)
        sql += " ORDER BY unit_id, indicator"
        out: dict[str, dict[str, str]] = {}
        for unit_id, name, value in self._conn.execute(sql, params).fetchall():
            out.setdefault(unit_id, {})[name] = value
        return out

    @_locked
    def get_event(self, event_id: str) -> EventSummary:
        row = self._conn.execute(
            "SELECT event_id, region_name, origin_time FROM t3_events WHERE event_id=?", (event_id,)
        ).fetchone()
        if row is None:
            raise NotFoundError(f"unknown event: {event_id}")
        count = self._conn.execute(
            "SELECT COUNT(*) FROM t3_alerts WHERE event_id=?", (event_id,)
        ).fetchone()[0]
        return EventSummary(row[0], row[1], row[2], count)

    # -- bulk CSV ------------------------------------------------------------

    @_locked
    def export_csv(self, table: str, path: str | Path) -> None:
        if table not in TABLE_NAMES:
            raise NotFoundError(f"unknown table: {table}")
        cur = self._conn.execute(f"SELECT * FROM {table}")
        headers = [d[0] for d in cur.description]
        with open(path, "w", newline="", encoding="utf-8") as fh:
            writer = csv.writer(fh)
            writer.writerow(headers)
            writer.writerows(cur.fetchall())

    @_locked
    def import_csv(self, table: str, path: str | Path) -> int:
        if table not in TABLE_NAMES:
            raise NotFoundError(f"unknown table: {table}")
        with open(path, newline="", encoding="utf-8") as fh:
            reader = csv.reader(fh)
            headers = next(reader)
            rows = list(reader)
        placeholders = ",".join("?" * len(headers))
        cur = self._conn.cursor()
        try:
            cur.executemany(f"INSERT OR REPLACE INTO {table} VALUES ({placeholders})", rows)
            self._conn.commit()
        except Exception:
            self._conn.rollback()
            raise
        return len(rows)
