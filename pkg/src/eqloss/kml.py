"""Thematic map layers as KML 2.2 documents.

Three techniques: choropleth (filled region polygons), prism (extruded
polygons whose height encodes the value) and pushpin (scaled point icons).
Output is deterministic byte for byte: units are emitted in sorted order and
all numbers use fixed-width formatting, so identical inputs produce
identical documents and the file repository can be used as a cache.
"""

from __future__ import annotations

import hashlib
import math
import os
from dataclasses import dataclass
from enum import Enum
from pathlib import Path
from typing import Mapping, Sequence
from xml.sax.saxutils import escape

from .errors import NotFoundError, ValidationError
from .geometry import GeometryIndex

RGBA = tuple[int, int, int, int]


class Technique(str, Enum):
    CHOROPLETH = "choropleth"
    PRISM = "prism"
    PUSHPIN = "pushpin"

    @classmethod
    def parse(cls, text: str) -> "Technique":
        try:
            return cls(text.strip().lower())
        except ValueError:
            raise ValidationError(f"unknown technique: {text!r}") from None


@dataclass(frozen=True)
class ColorRamp:
    """Ordered RGBA stops spread evenly over a value domain.

    Values outside [v_min, v_max] clamp to the end stops, so replayed alerts
    that exceed the initially chosen domain still render.
    """

    stops: tuple[RGBA, ...]
    v_min: float
    v_max: float

    def __post_init__(self) -> None:
        if len(self.stops) < 2:
            raise ValidationError("a color ramp needs at least 2 stops")
        if not self.v_min < self.v_max:
            raise ValidationError("ramp domain must satisfy v_min < v_max")
        for stop in self.stops:
            if len(stop) != 4 or any(not 0 <= ch <= 255 for ch in stop):
                raise ValidationError(f"bad RGBA stop: {stop}")

    def position(self, value: float) -> float:
        """Clamped relative position of a value in the domain."""
        t = (value - self.v_min) / (self.v_max - self.v_min)
        return min(1.0, max(0.0, t))

    def color_at(self, value: float) -> RGBA:
        t = self.position(value)
        segments = len(self.stops) - 1
        x = t * segments
        i = min(int(math.floor(x)), segments - 1)
        frac = x - i
        a, b = self.stops[i], self.stops[i + 1]
        return tuple(round(a[ch] + frac * (b[ch] - a[ch])) for ch in range(4))  # type: ignore[return-value]


def kml_color(rgba: RGBA) -> str:
    """KML's aabbggrr hex ordering."""
    r, g, b, a = rgba
    return f"{a:02x}{b:02x}{g:02x}{r:02x}"


@dataclass(frozen=True)
class LayerUnit:
    """One placemark: a region id (choropleth/prism) or a point (pushpin)."""

    unit_id: str
    value: float
    point: tuple[float, float] | None = None  # (lat, lon)
    balloon: str = ""


@dataclass(frozen=True)
class ThematicLayer:
    technique: Technique
    indicator: str
    units: tuple[LayerUnit, ...]
    ramp: ColorRamp
    prism_height_max: float = 200_000.0
    icon_scale_max: float = 3.0

    def style_hash(self) -> str:
        key = repr((self.technique.value, self.indicator, self.ramp, self.prism_height_max, self.icon_scale_max))
        return hashlib.sha1(key.encode("utf-8")).hexdigest()[:8]


def emit_description_balloon(unit_name: str, indicators: Mapping[str, object]) -> str:
    """HTML table fragment for a placemark pop-up; numbers use 4 decimals."""
    rows = []
    for name in indicators:
        value = indicators[name]
        if isinstance(value, (int, float)):
            text = f"{float(value):.4f}"
        else:
            text = escape(str(value))
        rows.append(f"<tr><td>{escape(str(name))}</td><td>{text}</td></tr>")
    body = "".join(rows)
    return f"<table><caption>{escape(unit_name)}</caption><tbody>{body}</tbody></table>"


def _fmt(x: float) -> str:
    return f"{x:.10f}"


def _coords(ring: Sequence[tuple[float, float]], altitude: float | None) -> str:
    if altitude is None:
        return " ".join(f"{_fmt(lon)},{_fmt(lat)}" for lon, lat in ring)
    return " ".join(f"{_fmt(lon)},{_fmt(lat)},{_fmt(altitude)}" for lon, lat in ring)


def emit_layer(layer: ThematicLayer, geometry: GeometryIndex | None = None) -> str:
    """Render a layer to KML text; requires geometry for region techniques."""
    lines: list[str] = []
    lines.append('<?xml version="1.0" encoding="UTF-8"?>')
    lines.append('<kml xmlns="http://www.opengis.net/kml/2.2">')
    lines.append("<Document>")
    lines.append(f"<name>{escape(layer.indicator)} ({layer.technique.value})</name>")

    units = sorted(layer.units, key=lambda u: u.unit_id)
    for unit in units:
        if math.isnan(unit.value) or math.isinf(unit.value):
            raise ValidationError(f"unit {unit.unit_id}: value is not finite")

    for unit in units:
        color = kml_color(layer.ramp.color_at(unit.value))
        description = (
            f"<description><![CDATA[{unit.balloon}]]></description>" if unit.balloon else ""
        )
        if layer.technique is Technique.PUSHPIN:
            if unit.point is None:
                raise ValidationError(f"pushpin unit {unit.unit_id} lacks a point coordinate")
            lat, lon = unit.point
            scale = 0.5 + layer.ramp.position(unit.value) * (layer.icon_scale_max - 0.5)
            lines.append("<Placemark>")
            lines.append(f"<name>{escape(unit.unit_id)}</name>")
            if description:
                lines.append(description)
            lines.append(
                f"<Style><IconStyle><color>{color}</color><scale>{scale:.4f}</scale></IconStyle></Style>"
            )
            lines.append(f"<Point><coordinates>{_fmt(lon)},{_fmt(lat)},0</coordinates></Point>")
            lines.append("</Placemark>")
            continue

        if geometry is None:
            raise NotFoundError(f"no geometry index supplied for region unit {unit.unit_id}")
        rings = geometry.rings_for(unit.unit_id)
        if rings is None:
            raise NotFoundError(f"no geometry for region {unit.unit_id}")
        lines.append("<Placemark>")
        lines.append(f"<name>{escape(unit.unit_id)}</name>")
        if description:
            lines.append(description)
        if layer.technique is Technique.CHOROPLETH:
            lines.append(
                "<Style><PolyStyle>"
                f"<color>{color}</color><fill>1</fill><outline>1</outline>"
                "</PolyStyle></Style>"
            )
            altitude = None
            extrude = ""
        else:  # prism
            height = layer.ramp.position(unit.value) * layer.prism_height_max
            lines.append(
                "<Style><PolyStyle>"
                f"<color>{color}</color><fill>1</fill><outline>1</outline>"
                "</PolyStyle></Style>"
            )
            altitude = height
            extrude = "<extrude>1</extrude><altitudeMode>absolute</altitudeMode>"
        geoms = []
        for ring in rings:
            geoms.append(
                "<Polygon>"
                + extrude
                + "<outerBoundaryIs><LinearRing><coordinates>"
                + _coords(ring, altitude)
                + "</coordinates></LinearRing></outerBoundaryIs></Polygon>"
            )
        if len(geoms) == 1:
            lines.append(geoms[0])
        else:
            lines.append("<MultiGeometry>" + "".join(geoms) + "</MultiGeometry>")
        lines.append("</Placemark>")

    lines.append("</Document>")
    lines.append("</kml>")
    return "\n".join(lines) + "\n"


class KmlRepository:
    """File repository for generated layers, keyed by event/version/layer/style.

    Writes are atomic (write to a temp name, then rename), so readers never
    observe a partially written document.
    """

    def __init__(self, root: str | Path):
        self.root = Path(root)

    def path_for(self, event_id: str, version: int, layer_name: str, technique: Technique, style_hash: str) -> Path:
        safe_event = event_id.replace("/", "_")
        return self.root / safe_event / str(version) / f"{layer_name}-{technique.value}-{style_hash}.kml"

    def get(self, path: Path) -> str | None:
        if path.is_file():
            return path.read_text(encoding="utf-8")
        return None

    def put(self, path: Path, document: str) -> None:
        path.parent.mkdir(parents=True, exist_ok=True)
        tmp = path.with_suffix(".kml.tmp")
        tmp.write_text(document, encoding="utf-8")
        os.replace(tmp, path)
