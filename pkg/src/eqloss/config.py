"""Runtime configuration for the service, CLI and scripts.

Everything an operator can point at a file or tune lives here: data files,
store location, HTTP settings, the lognormal spread default and the color
ramps per layer. Values load from YAML; omitted keys keep their defaults.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from pathlib import Path

import yaml

from .errors import ValidationError
from .kml import ColorRamp
from .model import GeoLevel

_DEFAULT_RAMPS: dict[str, ColorRamp] = {
    # green -> yellow -> red over the felt range
    "mmi": ColorRamp(stops=((0, 170, 0, 200), (255, 220, 0, 200), (200, 0, 0, 200)), v_min=1.0, v_max=10.0),
    "mdr": ColorRamp(stops=((40, 90, 200, 200), (220, 60, 30, 200)), v_min=0.0, v_max=1.0),
    "gul": ColorRamp(stops=((250, 240, 150, 200), (160, 30, 30, 220)), v_min=0.0, v_max=1e9),
    "nfl": ColorRamp(stops=((250, 240, 150, 200), (100, 20, 90, 220)), v_min=0.0, v_max=1e9),
    "population": ColorRamp(stops=((200, 200, 255, 200), (0, 0, 160, 220)), v_min=0.0, v_max=1e7),
}


@dataclass(frozen=True)
class AppConfig:
    data_dir: Path = Path("var")
    store_path: str = "var/elev.sqlite"
    kml_dir: Path = Path("var/kml")
    host: str = "127.0.0.1"
    port: int = 8400
    cors_origins: tuple[str, ...] = ()
    gazetteer_file: Path | None = None
    exposure_file: Path | None = None
    curve_file: Path = Path("data/mdr_curves.csv")
    economic_series_file: Path = Path("data/economic_series.csv")
    geometry_files: dict[GeoLevel, Path] = field(default_factory=dict)
    zeta_default: float = 0.6
    reference_year: int = 2012
    exposure_reference_year: int = 2012
    kml_level: GeoLevel = GeoLevel.STATE
    prism_height_max: float = 200_000.0
    frontend_dist: Path | None = None
    ramps: dict[str, ColorRamp] = field(default_factory=lambda: dict(_DEFAULT_RAMPS))

    @classmethod
    def from_yaml(cls, path: str | Path) -> "AppConfig":
        raw = yaml.safe_load(Path(path).read_text(encoding="utf-8")) or {}
        if not isinstance(raw, dict):
            raise ValidationError(f"{path}: config must be a mapping")
        kwargs: dict = {}
        for key in ("store_path", "host"):
            if key in raw:
                kwargs[key] = str(raw[key])
        for key in ("data_dir", "kml_dir", "gazetteer_file", "exposure_file", "curve_file",
                    "economic_series_file", "frontend_dist"):
            if key in raw and raw[key] is not None:
                kwargs[key] = Path(raw[key])
        for key in ("port", "reference_year", "exposure_reference_year"):
            if key in raw:
                kwargs[key] = int(raw[key])
        for key in ("zeta_default", "prism_height_max"):
            if key in raw:
                kwargs[key] = float(raw[key])
        if "cors_origins" in raw:
            kwargs["cors_origins"] = tuple(str(x) for x in raw["cors_origins"])
        if "kml_level" in raw:
            kwargs["kml_level"] = GeoLevel.parse(str(raw["kml_level"]))
        if "geometry_files" in raw:
            kwargs["geometry_files"] = {
                GeoLevel.parse(level): Path(p) for level, p in raw["geometry_files"].items()
            }
        if "ramps" in raw:
            ramps = dict(_DEFAULT_RAMPS)
            for name, spec in raw["ramps"].items():
                ramps[name] = ColorRamp(
                    stops=tuple(tuple(int(c) for c in stop) for stop in spec["stops"]),
                    v_min=float(spec["domain"][0]),
                    v_max=float(spec["domain"][1]),
                )
            kwargs["ramps"] = ramps
        return cls(**kwargs)

    def with_overrides(self, **kwargs) -> "AppConfig":
        return replace(self, **{k: v for k, v in kwargs.items() if v is not None})
