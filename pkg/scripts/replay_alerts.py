#!/usr/bin/env python3
"""Replay an archived alert sequence and print the evolving loss picture.

Feeds every alert XML in a directory (sorted by filename) through the
estimation pipeline against a fresh in-memory store, then prints one line
per alert version: magnitude, affected cities and country GUL/NFL. Useful
for eyeballing how estimates move as an event's data firms up.

    python scripts/replay_alerts.py tests/fixtures --pattern 'pager_tohoku_*.xml'
    python scripts/replay_alerts.py tests/fixtures --pattern 'pager_demo_*.xml'
"""

import argparse
from pathlib import Path

from eqloss.ingest import ingest_exposure, load_gazetteer
from eqloss.model import GeoHierarchy, GeoLevel
from eqloss.pipeline import run_estimation
from eqloss.store import ElevDb
from eqloss.vulnerability import load_mdr_curves

ROOT = Path(__file__).parent.parent


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("alert_dir", type=Path)
    parser.add_argument("--pattern", default="*.xml")
    parser.add_argument("--gazetteer", type=Path, default=ROOT / "tests/fixtures/gazetteer_demo.csv")
    parser.add_argument("--exposure", type=Path, default=ROOT / "tests/fixtures/exposure_demo.csv")
    parser.add_argument("--curves", type=Path, default=ROOT / "data/mdr_curves.csv")
    args = parser.parse_args()

    store = ElevDb(":memory:")
    hierarchy = GeoHierarchy(load_gazetteer(args.gazetteer).centres)
    store.load_hierarchy(hierarchy)
    store.put_exposure(ingest_exposure(args.exposure, hierarchy))
    curves = load_mdr_curves(args.curves)
    store.put_curves(curves)

    paths = sorted(args.alert_dir.glob(args.pattern))
    if not paths:
        parser.error(f"no files match {args.pattern} under {args.alert_dir}")

    print(f"{'file':28s} {'ver':>3s} {'mag':>5s} {'cities':>6s} {'country GUL':>16s} {'country NFL':>16s}")
    for path in paths:
        result = run_estimation(store, path.read_text(encoding="utf-8"), curves, replace=True)
        gul, nfl = result.country_totals
        cities = len(result.hazard.at_level(GeoLevel.CITY))
        magnitude = next(a.magnitude for a in store.list_alerts(result.event.event_id)
                         if a.version == result.alert_version)
        print(f"{path.name:28s} {result.alert_version:3d} {magnitude:5.1f} {cities:6d} {gul:16.4f} {nfl:16.4f}")


if __name__ == "__main__":
    main()
