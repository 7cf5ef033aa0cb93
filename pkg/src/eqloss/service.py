"""HTTP facade over the store: ingestion, data handlers, KML and portfolio.

All structured responses are JSON; KML is the only other content type.
Errors are structured ``{code, message}`` bodies. Read endpoints are pure
over store state, and alert-scoped responses always carry the (event,
version) they describe.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from decimal import Decimal
from pathlib import Path
from fastapi import FastAPI, Query, Request, Response
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import JSONResponse

from .config import AppConfig
from .errors import (
    DuplicateAlertError,
    EqlossError,
    MissingCurveError,
    NotFoundError,
    ParseError,
    SchemaError,
    ValidationError,
)
from .geometry import GeometryIndex, load_geometry
from .ingest import ingest_exposure, load_gazetteer
from .kml import (
    KmlRepository,
    LayerUnit,
    Technique,
    ThematicLayer,
    emit_description_balloon,
    emit_layer,
)
from .loss import LineOfBusiness, portfolio_breakdown
from .model import GeoHierarchy, GeoLevel
from .pipeline import run_estimation
from .store import ElevDb
from .vulnerability import MdrCurve, load_mdr_curves

logger = logging.getLogger(__name__)

KML_CONTENT_TYPE = "application/vnd.google-earth.kml+xml"
LAYERS = ("mmi", "mdr", "gul", "nfl", "population")


@dataclass
class AppContext:
    config: AppConfig
    store: ElevDb
    curves: dict[str, MdrCurve]
    geometry: dict[GeoLevel, GeometryIndex]
    kml_repo: KmlRepository


def build_context(config: AppConfig) -> AppContext:
    """Open the store and load reference data named in the config."""
    Path(config.data_dir).mkdir(parents=True, exist_ok=True)
    store = ElevDb(config.store_path)
    if config.gazetteer_file is not None:
        store.load_hierarchy(GeoHierarchy(load_gazetteer(config.gazetteer_file).centres))
    curves = load_mdr_curves(config.curve_file) if Path(config.curve_file).is_file() else {}
    if curves:
        store.put_curves(curves)
    else:
        curves = store.curves()
    if config.exposure_file is not None:
        store.put_exposure(
            ingest_exposure(config.exposure_file, store.hierarchy(), config.exposure_reference_year)
        )
    geometry = {
        level: load_geometry(path, level) for level, path in sorted(config.geometry_files.items())
    }
    return AppContext(
        config=config,
        store=store,
        curves=curves,
        geometry=geometry,
        kml_repo=KmlRepository(config.kml_dir),
    )


def _parse_level(text: str) -> GeoLevel:
    try:
        return GeoLevel.parse(text)
    except ValidationError as exc:
        raise _HttpDomainError(422, "invalid_level", str(exc)) from None


def _parse_lob(text: str | None) -> LineOfBusiness | None:
    if text is None:
        return None
    try:
        return LineOfBusiness.parse(text)
    except ValidationError as exc:
        raise _HttpDomainError(422, "invalid_lob", str(exc)) from None


class _HttpDomainError(Exception):
    def __init__(self, status: int, code: str, message: str):
        self.status = status
        self.code = code
        self.message = message


_STATUS_BY_ERROR: tuple[tuple[type, int], ...] = (
    (NotFoundError, 404),
    (DuplicateAlertError, 409),
    (MissingCurveError, 422),
    (ParseError, 400),
    (SchemaError, 400),
)


def create_app(context: AppContext) -> FastAPI:
    app = FastAPI(title="eqloss", docs_url=None, redoc_url=None)
    if context.config.cors_origins:
        app.add_middleware(
            CORSMiddleware,
            allow_origins=list(context.config.cors_origins),
            allow_methods=["*"],
            allow_headers=["*"],
        )

    store = context.store

    @app.exception_handler(_HttpDomainError)
    async def _domain_error(_: Request, exc: _HttpDomainError) -> JSONResponse:
        return JSONResponse(status_code=exc.status, content={"code": exc.code, "message": exc.message})

    @app.exception_handler(EqlossError)
    async def _eqloss_error(_: Request, exc: EqlossError) -> JSONResponse:
        status = 400
        for err_type, err_status in _STATUS_BY_ERROR:
            if isinstance(exc, err_type):
                status = err_status
                break
        return JSONResponse(status_code=status, content={"code": exc.code, "message": str(exc)})

    @app.get("/events")
    def list_events() -> list[dict]:
        return [
            {
                "event_id": e.event_id,
                "region_name": e.region_name,
                "origin_time": e.origin_time,
                "alert_count": e.alert_count,
            }
            for e in store.list_events()
        ]

    @app.get("/events/{event_id}/alerts")
    def list_alerts(event_id: str) -> list[dict]:
        return [
            {
                "event_id": a.event_id,
                "version": a.version,
                "received_time": a.received_time,
                "magnitude": a.magnitude,
                "epicenter": {"lat": a.epicenter[0], "lon": a.epicenter[1]},
                "total_gul": float(a.total_gul),
                "total_nfl": float(a.total_nfl),
            }
            for a in store.list_alerts(event_id)
        ]

    @app.get("/events/{event_id}/alerts/{version}/losses")
    def get_losses(event_id: str, version: int, level: str = Query(...), lob: str | None = None) -> dict:
        geo_level = _parse_level(level)
        lob_filter = _parse_lob(lob)
        rows = store.query_losses(event_id, version, geo_level, lob_filter)
        by_unit: dict[str, tuple[Decimal, Decimal]] = {}
        for rec in rows:
            g, n = by_unit.get(rec.unit[1], (Decimal("0"), Decimal("0")))
            by_unit[rec.unit[1]] = (g + rec.gul.value, n + rec.nfl.value)
        out_rows = [
            {"unit": unit, "gul": float(g), "nfl": float(n)} for unit, (g, n) in sorted(by_unit.items())
        ]
        total_g = sum((g for g, _ in by_unit.values()), Decimal("0"))
        total_n = sum((n for _, n in by_unit.values()), Decimal("0"))
        guls = [r["gul"] for r in out_rows]
        return {
            "event_id": event_id,
            "version": version,
            "level": geo_level.label,
            "lob": lob_filter.value if lob_filter else None,
            "rows": out_rows,
            "totals": {"gul": float(total_g), "nfl": float(total_n)},
            "domain": {"min": min(guls), "max": max(guls)} if guls else {"min": 0.0, "max": 0.0},
        }

    @app.get("/events/{event_id}/alerts/{version}/hazard")
    def get_hazard(event_id: str, version: int, level: str = Query(...)) -> dict:
        geo_level = _parse_level(level)
        indicators = store.query_indicators(event_id, version, geo_level)
        rows = []
        for unit, values in sorted(indicators.items()):
            if "MMI" not in values:
                continue
            rows.append(
                {
                    "unit": unit,
                    "mmi": float(values["MMI"]),
                    "mdr": float(values["MDR"]) if "MDR" in values else None,
                }
            )
        mmis = [r["mmi"] for r in rows]
        return {
            "event_id": event_id,
            "version": version,
            "level": geo_level.label,
            "rows": rows,
            "domain": {"min": min(mmis), "max": max(mmis)} if mmis else {"min": 0.0, "max": 0.0},
        }

    @app.get("/events/{event_id}/alerts/{version}/exposure")
    def get_exposure(event_id: str, version: int, level: str = Query(...)) -> dict:
        geo_level = _parse_level(level)
        store.require_alert(event_id, version)  # alert-scoped for a uniform client surface
        rows = _exposure_rows(store, geo_level)
        return {
            "event_id": event_id,
            "version": version,
            "level": geo_level.label,
            "rows": rows,
            "totals": {
                "gul": float(sum(Decimal(repr(r["gul"])) for r in rows)) if rows else 0.0,
                "nfl": float(sum(Decimal(repr(r["nfl"])) for r in rows)) if rows else 0.0,
            },
        }

    @app.get("/static")
    def get_static(unit: str = Query(...)) -> dict:
        indicators = store.static_indicators(unit)
        hierarchy = store.hierarchy()
        extra: dict[str, float] = {}
        if unit in hierarchy:
            extra["population"] = float(hierarchy.centre(unit).population)
        elif hierarchy.has_unit(unit):
            extra["population"] = float(hierarchy.region(unit).population)
        return {"unit": unit, "indicators": {**extra, **indicators}}

    @app.get("/geometry")
    def get_geometry(level: str = Query(...)) -> dict:
        geo_level = _parse_level(level)
        index = context.geometry.get(geo_level)
        if index is None:
            raise NotFoundError(f"no geometry configured for level {geo_level.label}")
        features = [
            {"id": rid, "rings": [[[lon, lat] for lon, lat in ring] for ring in index.rings_for(rid)]}
            for rid in index.region_ids()
        ]
        return {"level": geo_level.label, "features": features}

    @app.get("/events/{event_id}/alerts/{version}/kml")
    def get_kml(
        event_id: str,
        version: int,
        layer: str = Query(...),
        technique: str = "choropleth",
        level: str | None = None,
    ) -> Response:
        layer_name = layer.strip().lower()
        if layer_name not in LAYERS:
            raise _HttpDomainError(422, "invalid_layer", f"unknown layer: {layer}")
        try:
            tech = Technique.parse(technique)
        except ValidationError as exc:
            raise _HttpDomainError(422, "invalid_technique", str(exc)) from None
        geo_level = _parse_level(level) if level else (
            GeoLevel.CITY if tech is Technique.PUSHPIN else context.config.kml_level
        )
        document, _ = _render_kml(context, event_id, version, layer_name, tech, geo_level)
        return Response(content=document, media_type=KML_CONTENT_TYPE)

    @app.get("/events/{event_id}/alerts/{version}/portfolio")
    def get_portfolio(event_id: str, version: int) -> dict:
        losses = store.query_losses(event_id, version, GeoLevel.COUNTRY)
        breakdown = portfolio_breakdown(losses, store.exposure_records())
        totals = breakdown.totals()
        buckets = {}
        fractions = {}
        for lob in LineOfBusiness:
            b = breakdown.buckets[lob]
            buckets[lob.value] = {
                "gul_loss": float(b.gul_loss),
                "nfl_loss": float(b.nfl_loss),
                "gul_exposure": float(b.gul_exposure),
                "nfl_exposure": float(b.nfl_exposure),
            }
            fractions[lob.value] = {
                "gul_loss": float(b.gul_loss / totals.gul_loss) if totals.gul_loss else 0.0,
                "nfl_loss": float(b.nfl_loss / totals.nfl_loss) if totals.nfl_loss else 0.0,
                "gul_exposure": float(b.gul_exposure / totals.gul_exposure) if totals.gul_exposure else 0.0,
                "nfl_exposure": float(b.nfl_exposure / totals.nfl_exposure) if totals.nfl_exposure else 0.0,
            }
        return {
            "event_id": event_id,
            "version": version,
            "buckets": buckets,
            "fractions": fractions,
            "totals": {
                "gul_loss": float(totals.gul_loss),
                "nfl_loss": float(totals.nfl_loss),
                "gul_exposure": float(totals.gul_exposure),
                "nfl_exposure": float(totals.nfl_exposure),
            },
        }

    @app.post("/ingest/pager")
    async def ingest_pager(request: Request) -> dict:
        body = (await request.body()).decode("utf-8")
        result = run_estimation(store, body, context.curves, context.geometry)
        gul, nfl = result.country_totals
        return {
            "event_id": result.event.event_id,
            "version": result.alert_version,
            "country_gul": float(gul),
            "country_nfl": float(nfl),
        }

    dist = context.config.frontend_dist
    if dist is not None and Path(dist).is_dir():
        from fastapi.staticfiles import StaticFiles

        app.mount("/", StaticFiles(directory=str(dist), html=True), name="dashboard")

    return app


def _exposure_rows(store: ElevDb, level: GeoLevel) -> list[dict]:
    """Exposure restated at one level: records split down to cities, then
    city shares summed into the requested level's units."""
    from .pipeline import city_exposure

    hierarchy = store.hierarchy()
    records = store.exposure_records()
    if not records:
        return []
    per_city = city_exposure(records, hierarchy)
    acc: dict[str, tuple[Decimal, Decimal]] = {}
    for cid, per_lob in per_city.items():
        centre = hierarchy.centre(cid)
        unit: str | None = cid if level == GeoLevel.CITY else centre.parent(level)
        if unit is None:
            continue
        for gul, nfl in per_lob.values():
            g, n = acc.get(unit, (Decimal("0"), Decimal("0")))
            acc[unit] = (g + gul.value, n + nfl.value)
    return [{"unit": unit, "gul": float(g), "nfl": float(n)} for unit, (g, n) in sorted(acc.items())]


def _render_kml(
    context: AppContext,
    event_id: str,
    version: int,
    layer_name: str,
    technique: Technique,
    level: GeoLevel,
) -> tuple[str, Path]:
    """Build (or serve from the repository) one thematic layer document.

    Returns the document text and its repository path."""
    store = context.store
    hierarchy = store.hierarchy()
    ramp = context.config.ramps[layer_name]

    units: list[LayerUnit] = []
    if layer_name == "population":
        store.require_alert(event_id, version)
        if level == GeoLevel.CITY:
            values = {c.id: float(c.population) for c in hierarchy.centres()}
        else:
            values = {rid: float(hierarchy.region(rid).population) for rid in hierarchy.region_ids(level)}
    else:
        indicator = layer_name.upper()
        rows = store.query_indicators(event_id, version, level, indicator)
        values = {unit: float(vals[indicator]) for unit, vals in rows.items()}

    for unit_id in sorted(values):
        point = _point_for_unit(context, hierarchy, unit_id, level)
        balloon = _balloon_for_unit(store, hierarchy, event_id, version, unit_id, level)
        units.append(LayerUnit(unit_id=unit_id, value=values[unit_id], point=point, balloon=balloon))

    layer = ThematicLayer(
        technique=technique,
        indicator=layer_name,
        units=tuple(units),
        ramp=ramp,
        prism_height_max=context.config.prism_height_max,
    )
    path = context.kml_repo.path_for(event_id, version, layer_name, technique, layer.style_hash())
    cached = context.kml_repo.get(path)
    if cached is not None:
        return cached, path
    geometry = context.geometry.get(level)
    document = emit_layer(layer, geometry)
    context.kml_repo.put(path, document)
    return document, path


def _point_for_unit(
    context: AppContext, hierarchy: GeoHierarchy, unit_id: str, level: GeoLevel
) -> tuple[float, float] | None:
    if unit_id in hierarchy:
        centre = hierarchy.centre(unit_id)
        return (centre.latitude, centre.longitude)
    index = context.geometry.get(level)
    if index is None:
        return None
    rings = index.rings_for(unit_id)
    if not rings:
        return None
    # vertex mean of the first ring: crude but deterministic centroid
    ring = rings[0][:-1]
    lon = sum(p[0] for p in ring) / len(ring)
    lat = sum(p[1] for p in ring) / len(ring)
    return (lat, lon)


def _balloon_for_unit(
    store: ElevDb,
    hierarchy: GeoHierarchy,
    event_id: str,
    version: int,
    unit_id: str,
    level: GeoLevel,
) -> str:
    indicators: dict[str, object] = {}
    if unit_id in hierarchy:
        indicators["population"] = float(hierarchy.centre(unit_id).population)
    elif hierarchy.has_unit(unit_id):
        indicators["population"] = float(hierarchy.region(unit_id).population)
    try:
        alert_values = store.query_indicators(event_id, version, level).get(unit_id, {})
    except NotFoundError:
        alert_values = {}
    for name in ("MMI", "MDR", "GUL", "NFL"):
        if name in alert_values:
            indicators[name] = float(alert_values[name])
    for name, value in store.static_indicators(unit_id).items():
        indicators.setdefault(name, value)
    display = hierarchy.centre(unit_id).name if unit_id in hierarchy else unit_id
    return emit_description_balloon(display, indicators)
