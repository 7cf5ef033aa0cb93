"""Region polygons and point-in-region lookup.

Polygons arrive as GeoJSON-style files (one per geographic level) produced
offline from simplified shapefiles. Containment uses the even-odd rule with
explicit edge handling: a point exactly on a boundary counts as inside, and
when a point falls inside several regions (shared borders) the region with
the lexicographically smaller id wins, which keeps lookups deterministic
across runs and platforms.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

from .errors import IntegrityError, ValidationError
from .model import GeoLevel

# A ring is a closed sequence of (lon, lat) vertices; a polygon is a list of
# rings (outer ring plus holes); a region's geometry is a list of polygons.
Ring = list[tuple[float, float]]


def _point_on_segment(px: float, py: float, ax: float, ay: float, bx: float, by: float) -> bool:
    # collinear and within the bounding box of the segment
    cross = (bx - ax) * (py - ay) - (by - ay) * (px - ax)
    if cross != 0.0:
        return False
    return min(ax, bx) <= px <= max(ax, bx) and min(ay, by) <= py <= max(ay, by)


def point_in_rings(lon: float, lat: float, rings: list[Ring]) -> bool:
    """Even-odd containment over a set of rings; boundary points are inside.

    Holes need no special casing: a point inside a hole crosses both the
    outer ring and the hole ring an odd number of times each, giving even
    parity overall.
    """
    inside = False
    for ring in rings:
        n = len(ring)
        for i in range(n):
            ax, ay = ring[i - 1]
            bx, by = ring[i]
            if _point_on_segment(lon, lat, ax, ay, bx, by):
                return True
            if (ay > lat) != (by > lat):
                x_cross = ax + (lat - ay) * (bx - ax) / (by - ay)
                if lon < x_cross:
                    inside = not inside
                elif lon == x_cross:
                    return True
    return inside


@dataclass(frozen=True)
class _RegionShape:
    region_id: str
    rings: tuple[Ring, ...]
    bbox: tuple[float, float, float, float]  # lon_min, lat_min, lon_max, lat_max


class GeometryIndex:
    """Polygon set for one geographic level with point lookup."""

    def __init__(self, level: GeoLevel, polygons: dict[str, list[Ring]]):
        self.level = level
        self._shapes: list[_RegionShape] = []
        for rid in sorted(polygons):
            rings = polygons[rid]
            for ring in rings:
                if len(ring) < 3:
                    raise ValidationError(f"region {rid}: ring with fewer than 3 vertices")
                if ring[0] != ring[-1]:
                    raise ValidationError(f"region {rid}: ring is not closed")
            lons = [p[0] for ring in rings for p in ring]
            lats = [p[1] for ring in rings for p in ring]
            self._shapes.append(
                _RegionShape(
                    region_id=rid,
                    rings=tuple(rings),
                    bbox=(min(lons), min(lats), max(lons), max(lats)),
                )
            )

    def region_ids(self) -> list[str]:
        return [s.region_id for s in self._shapes]

    def rings_for(self, region_id: str) -> tuple[Ring, ...] | None:
        for s in self._shapes:
            if s.region_id == region_id:
                return s.rings
        return None

    def locate(self, latitude: float, longitude: float) -> str | None:
        """Id of the containing region, smallest id first on shared borders."""
        for s in self._shapes:  # shapes sorted by id, so first hit wins ties
            lon_min, lat_min, lon_max, lat_max = s.bbox
            if not (lon_min <= longitude <= lon_max and lat_min <= latitude <= lat_max):
                continue
            if point_in_rings(longitude, latitude, list(s.rings)):
                return s.region_id
        return None


def locate_in_region(point: tuple[float, float], index: GeometryIndex) -> str | None:
    """Containing region id for a (lat, lon) point, or None (e.g. open ocean)."""
    lat, lon = point
    return index.locate(lat, lon)


def _rings_from_geojson(geom: dict) -> list[Ring]:
    gtype = geom.get("type")
    if gtype == "Polygon":
        poly_list = [geom["coordinates"]]
    elif gtype == "MultiPolygon":
        poly_list = geom["coordinates"]
    else:
        raise ValidationError(f"unsupported geometry type: {gtype}")
    rings: list[Ring] = []
    for polygon in poly_list:
        for ring in polygon:
            rings.append([(float(lon), float(lat)) for lon, lat in ring])
    return rings


def load_geometry(path: str | Path, level: GeoLevel) -> GeometryIndex:
    """Load one level's region polygons from a GeoJSON FeatureCollection.

    Each feature must carry an ``id`` property naming the region.
    """
    data = json.loads(Path(path).read_text(encoding="utf-8"))
    if data.get("type") != "FeatureCollection":
        raise ValidationError(f"{path}: expected a FeatureCollection")
    polygons: dict[str, list[Ring]] = {}
    for feature in data.get("features", []):
        props = feature.get("properties") or {}
        rid = props.get("id")
        if not rid:
            raise ValidationError(f"{path}: feature without an 'id' property")
        if rid in polygons:
            raise IntegrityError(f"{path}: duplicate region id {rid}")
        polygons[rid] = _rings_from_geojson(feature["geometry"])
    return GeometryIndex(level, polygons)
