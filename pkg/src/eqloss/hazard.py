"""Region-level intensity from city intensity by population weighting.

A region's MMI is the population-weighted mean of its member units:

    MMI(region) = sum_j MMI(unit_j) * P(unit_j) / sum_j P(unit_j)

applied iteratively city -> county -> state -> country, each step feeding on
the immediately lower level's values and populations. Weights above the city
level are sums of member-city populations from the same alert, which makes
the nested means algebraically identical to aggregating cities directly.
Cities in jurisdictions without a county (or state) feed the next present
level. Members are iterated in sorted id order so results are independent of
input ordering, bit for bit.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping

from .errors import DegenerateGroupError, ValidationError
from .model import MMI_MAX, MMI_MIN, GeoHierarchy, GeoLevel, REGION_LEVELS


@dataclass(frozen=True)
class HazardField:
    """Per-unit MMI for one alert version, at every geographic level."""

    alert: tuple[str, int]
    values: Mapping[tuple[GeoLevel, str], float] = field(default_factory=dict)

    def __post_init__(self) -> None:
        for (level, unit), mmi in self.values.items():
            if not MMI_MIN <= mmi <= MMI_MAX:
                raise ValidationError(f"hazard value for {level.label} {unit} out of [1, 12]: {mmi}")

    def at_level(self, level: GeoLevel) -> dict[str, float]:
        return {unit: v for (lv, unit), v in self.values.items() if lv == level}


def aggregate_mmi(
    city_mmi: Mapping[str, float],
    populations: Mapping[str, float],
    grouping: Mapping[str, str],
) -> dict[str, float]:
    """One aggregation step: population-weighted mean MMI per group.

    Raises DegenerateGroupError when a group's total population is zero.
    """
    groups: dict[str, list[str]] = {}
    for unit in city_mmi:
        if unit not in grouping:
            raise ValidationError(f"unit {unit} has no grouping entry")
        if unit not in populations:
            raise ValidationError(f"unit {unit} has no population")
        if populations[unit] < 0:
            raise ValidationError(f"unit {unit} has negative population")
        groups.setdefault(grouping[unit], []).append(unit)

    out: dict[str, float] = {}
    for region_id in sorted(groups):
        members = sorted(groups[region_id])
        total = 0.0
        weighted = 0.0
        for unit in members:
            p = populations[unit]
            total += p
            weighted += city_mmi[unit] * p
        if total == 0:
            raise DegenerateGroupError(region_id)
        out[region_id] = weighted / total
    return out


def compute_hazard_field(
    event_id: str,
    version: int,
    city_mmi: Mapping[str, float],
    populations: Mapping[str, float],
    hierarchy: GeoHierarchy,
) -> HazardField:
    """Full hazard field for one alert: city values plus all region aggregates.

    Each affected unit flows upward to its first present ancestor; a unit
    whose parent at some level is absent skips that level.
    """
    values: dict[tuple[GeoLevel, str], float] = {}
    # working pool of units not yet absorbed by a region: id -> (mmi, pop, parent)
    pool: dict[str, tuple[float, float, str | None]] = {}
    for cid in sorted(city_mmi):
        centre = hierarchy.centre(cid)
        parent = _first_present_parent(centre.parent_ids)
        values[(GeoLevel.CITY, cid)] = city_mmi[cid]
        pool[cid] = (city_mmi[cid], populations[cid], parent)

    for level in REGION_LEVELS:
        batch = {
            uid: entry
            for uid, entry in pool.items()
            if entry[2] is not None and hierarchy.region_level(entry[2]) == level
        }
        if not batch:
            continue
        mmi = {uid: e[0] for uid, e in batch.items()}
        pops = {uid: e[1] for uid, e in batch.items()}
        grouping = {uid: e[2] for uid, e in batch.items()}
        aggregated = aggregate_mmi(mmi, pops, grouping)  # type: ignore[arg-type]
        for uid in batch:
            del pool[uid]
        for region_id, region_mmi in aggregated.items():
            values[(level, region_id)] = region_mmi
            region_pop = sum(batch[uid][1] for uid in sorted(batch) if batch[uid][2] == region_id)
            pool[region_id] = (region_mmi, region_pop, hierarchy.region_parent(region_id))

    return HazardField(alert=(event_id, version), values=values)


def _first_present_parent(parent_ids: Mapping[GeoLevel, str]) -> str | None:
    for level in REGION_LEVELS:
        if level in parent_ids:
            return parent_ids[level]
    return None
