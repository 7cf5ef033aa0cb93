"""Post-event earthquake insured-loss estimation and visualisation backend."""

from .model import (
    AlertVersion,
    EarthquakeEvent,
    GeoHierarchy,
    GeoLevel,
    MonetaryAmount,
    PopulationCentre,
    Region,
)

__all__ = [
    "AlertVersion",
    "EarthquakeEvent",
    "GeoHierarchy",
    "GeoLevel",
    "MonetaryAmount",
    "PopulationCentre",
    "Region",
]
