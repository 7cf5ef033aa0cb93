"""End-to-end estimation for one alert document.

Steps, in order: resolve the document's cities against the configured
hierarchy (gazetteer is the master; unknown cities fall back to their
embedded parent attributes, then to geometry lookup), aggregate intensity up
the levels, interpolate damage ratios with each unit's country curve, split
exposure onto cities by population, multiply, aggregate, and persist the
whole result atomically.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from decimal import Decimal
from typing import Mapping, Sequence

from .errors import DuplicateAlertError, MissingCurveError, ReferentialError
from .geometry import GeometryIndex, locate_in_region
from .hazard import HazardField, compute_hazard_field
from .ingest import AlertDocument, IngestReport, parse_pager_document
from .loss import (
    ExposureRecord,
    LineOfBusiness,
    LossRecord,
    aggregate_losses,
    compute_city_loss,
    disaggregate_exposure,
)
from .model import (
    EarthquakeEvent,
    GeoHierarchy,
    GeoLevel,
    MonetaryAmount,
    PopulationCentre,
    REGION_LEVELS,
)
from .store import ElevDb
from .vulnerability import MdrCurve, mmi_to_mdr

logger = logging.getLogger(__name__)


@dataclass
class EstimationResult:
    event: EarthquakeEvent
    alert_version: int
    hazard: HazardField
    mdr_values: dict[tuple[GeoLevel, str], float]
    losses: list[LossRecord]
    totals: tuple[MonetaryAmount, MonetaryAmount]
    report: IngestReport = field(default_factory=IngestReport)

    @property
    def country_totals(self) -> tuple[Decimal, Decimal]:
        return self.totals[0].value, self.totals[1].value


@dataclass
class ResolvedAlert:
    """Alert cities joined to the geographic hierarchy.

    ``hierarchy`` carries every centre needed for this alert; ``populations``
    are the weights for aggregation (alert-embedded figures win over the
    gazetteer, since weights must come from the same alert). ``admitted``
    lists centres unknown to the gazetteer that were resolved via embedded
    parents or geometry lookup and should join the persistent store.
    """

    hierarchy: GeoHierarchy
    city_mmi: dict[str, float]
    populations: dict[str, float]
    admitted: list[PopulationCentre]


def resolve_centres(
    doc: AlertDocument,
    hierarchy: GeoHierarchy,
    geometry: Mapping[GeoLevel, GeometryIndex] | None = None,
    report: IngestReport | None = None,
) -> ResolvedAlert:
    """Join one alert's city rows to the configured hierarchy.

    Unknown cities that cannot be resolved to a country are dropped and
    counted in the report.
    """
    report = report if report is not None else IngestReport()
    centres: dict[str, PopulationCentre] = {c.id: c for c in hierarchy.centres()}
    city_mmi: dict[str, float] = {}
    populations: dict[str, float] = {}
    admitted: list[PopulationCentre] = []

    for city in doc.cities:
        mmi = doc.alert.city_mmi[city.id]
        if city.id not in centres:
            parents = dict(city.parent_ids)
            if GeoLevel.COUNTRY not in parents and geometry:
                for level in REGION_LEVELS:
                    index = geometry.get(level)
                    if index is not None and level not in parents:
                        region = locate_in_region((city.latitude, city.longitude), index)
                        if region is not None:
                            parents[level] = region
            if GeoLevel.COUNTRY not in parents:
                report.unresolved_centres += 1
                logger.warning("dropping unresolvable city %s (no country)", city.id)
                continue
            centre = PopulationCentre(
                id=city.id, name=city.name, latitude=city.latitude, longitude=city.longitude,
                population=city.population, parent_ids=parents,
            )
            centres[city.id] = centre
            admitted.append(centre)
        city_mmi[city.id] = mmi
        known = centres[city.id]
        populations[city.id] = city.population if city.population > 0 else known.population

    return ResolvedAlert(
        hierarchy=GeoHierarchy(centres.values()),
        city_mmi=city_mmi,
        populations=populations,
        admitted=admitted,
    )


def city_exposure(
    exposures: Sequence[ExposureRecord],
    hierarchy: GeoHierarchy,
) -> dict[str, dict[LineOfBusiness, tuple[MonetaryAmount, MonetaryAmount]]]:
    """Exposure at the city level: region records split by population share,
    city records passed through, multiple covering records summed."""
    out: dict[str, dict[LineOfBusiness, tuple[MonetaryAmount, MonetaryAmount]]] = {}

    def add(cid: str, lob: LineOfBusiness, gul: MonetaryAmount, nfl: MonetaryAmount) -> None:
        per_lob = out.setdefault(cid, {})
        if lob in per_lob:
            g0, n0 = per_lob[lob]
            per_lob[lob] = (g0 + gul, n0 + nfl)
        else:
            per_lob[lob] = (gul, nfl)

    for record in exposures:
        if record.level == GeoLevel.CITY:
            if record.unit_id not in hierarchy:
                raise ReferentialError(f"exposure references unknown centre: {record.unit_id}")
            add(record.unit_id, record.line_of_business, record.gul_exposure, record.nfl_exposure)
            continue
        members = [hierarchy.centre(cid) for cid in hierarchy.members(record.unit_id)]
        for cid, (gul, nfl) in disaggregate_exposure(record, members).items():
            add(cid, record.line_of_business, gul, nfl)
    return out


def run_estimation(
    store: ElevDb,
    document: str,
    curves: Mapping[str, MdrCurve],
    geometry: Mapping[GeoLevel, GeometryIndex] | None = None,
    replace: bool = False,
) -> EstimationResult:
    """Estimate losses for one alert document and persist the results.

    Raises DuplicateAlertError when this (event, version) was already
    ingested and ``replace`` is false.
    """
    doc, report = parse_pager_document(document)
    if not replace and store.alert_exists(doc.event.event_id, doc.alert.version):
        raise DuplicateAlertError(doc.event.event_id, doc.alert.version)

    base = store.hierarchy()
    resolved = resolve_centres(doc, base, geometry, report)
    hierarchy, city_mmi, populations = resolved.hierarchy, resolved.city_mmi, resolved.populations
    if resolved.admitted:
        store.load_hierarchy(GeoHierarchy(list(base.centres()) + resolved.admitted))

    hazard = compute_hazard_field(
        doc.event.event_id, doc.alert.version, city_mmi, populations, hierarchy
    )

    mdr_values: dict[tuple[GeoLevel, str], float] = {}
    for (level, unit_id), mmi in hazard.values.items():
        country = hierarchy.country_of_unit(unit_id)
        curve = curves.get(country)
        if curve is None:
            raise MissingCurveError(country)
        mdr_values[(level, unit_id)] = mmi_to_mdr(mmi, curve)

    exposures = store.exposure_records()
    exposure_by_city = city_exposure(exposures, hierarchy)

    losses: list[LossRecord] = []
    year = exposures[0].gul_exposure.reference_year if exposures else 2012
    all_line_city: dict[str, tuple[MonetaryAmount, MonetaryAmount]] = {}
    for lob in LineOfBusiness:
        lob_city_losses: dict[str, tuple[MonetaryAmount, MonetaryAmount]] = {}
        for cid in city_mmi:
            per_lob = exposure_by_city.get(cid)
            if not per_lob or lob not in per_lob:
                continue
            gul_exp, nfl_exp = per_lob[lob]
            mdr = mdr_values[(GeoLevel.CITY, cid)]
            lob_city_losses[cid] = compute_city_loss(mdr, gul_exp, nfl_exp)
        if not lob_city_losses:
            continue
        aggregated = aggregate_losses(lob_city_losses, hierarchy)
        for (level, unit_id), (gul, nfl) in aggregated.items():
            losses.append(
                LossRecord(
                    alert=(doc.event.event_id, doc.alert.version),
                    unit=(level, unit_id),
                    line_of_business=lob,
                    gul=gul,
                    nfl=nfl,
                )
            )
        for cid, (gul, nfl) in lob_city_losses.items():
            g0, n0 = all_line_city.get(cid, (MonetaryAmount.zero(year), MonetaryAmount.zero(year)))
            all_line_city[cid] = (g0 + gul, n0 + nfl)

    total_gul = MonetaryAmount.zero(year)
    total_nfl = MonetaryAmount.zero(year)
    for rec in losses:
        if rec.unit[0] == GeoLevel.COUNTRY:
            total_gul = total_gul + rec.gul
            total_nfl = total_nfl + rec.nfl

    store.put_alert_results(
        doc.event, doc.alert, hazard, mdr_values, losses, (total_gul, total_nfl)
    )
    logger.info(
        "estimated %s v%d: GUL %s, NFL %s (%d affected cities)",
        doc.event.event_id, doc.alert.version, total_gul.value, total_nfl.value, len(city_mmi),
    )
    return EstimationResult(
        event=doc.event,
        alert_version=doc.alert.version,
        hazard=hazard,
        mdr_values=mdr_values,
        losses=losses,
        totals=(total_gul, total_nfl),
        report=report,
    )
