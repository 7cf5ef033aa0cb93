import random
from pathlib import Path

import pytest

from eqloss.errors import ValidationError
from eqloss.geometry import GeometryIndex, load_geometry, locate_in_region, point_in_rings
from eqloss.model import GeoLevel

FIXTURES = Path(__file__).parent / "fixtures"


def oracle_even_odd(lon, lat, rings):
    """Reference containment: plain even-odd ray cast plus explicit edge test.

    Written independently of the production lookup; iterates edges the naive
    way and never short-circuits on bounding boxes.
    """
    for ring in rings:
        for i in range(len(ring)):
            (x1, y1), (x2, y2) = ring[i], ring[(i + 1) % len(ring)]
            if (x1, y1) == (lon, lat):
                return True
            dx, dy = x2 - x1, y2 - y1
            cross = dx * (lat - y1) - dy * (lon - x1)
            if cross == 0 and min(x1, x2) <= lon <= max(x1, x2) and min(y1, y2) <= lat <= max(y1, y2):
                return True
    crossings = 0
    for ring in rings:
        for i in range(len(ring)):
            (x1, y1), (x2, y2) = ring[i], ring[(i + 1) % len(ring)]
            if (y1 > lat) != (y2 > lat):
                t = (lat - y1) / (y2 - y1)
                x_at = x1 + t * (x2 - x1)
                if x_at > lon:
                    crossings += 1
    return crossings % 2 == 1


def square(x0, y0, x1, y1):
    return [(x0, y0), (x1, y0), (x1, y1), (x0, y1), (x0, y0)]


class TestPointInRings:
    def test_inside(self):
        assert point_in_rings(0.5, 0.5, [square(0, 0, 1, 1)])

    def test_outside(self):
        assert not point_in_rings(1.5, 0.5, [square(0, 0, 1, 1)])

    def test_boundary_is_inside(self):
        assert point_in_rings(1.0, 0.5, [square(0, 0, 1, 1)])
        assert point_in_rings(0.0, 0.0, [square(0, 0, 1, 1)])

    def test_hole(self):
        rings = [square(0, 0, 4, 4), square(1, 1, 3, 3)]
        assert point_in_rings(0.5, 0.5, rings)
        assert not point_in_rings(2.0, 2.0, rings)  # inside the hole
        assert point_in_rings(1.0, 2.0, rings)  # hole boundary counts as inside

    def test_agrees_with_oracle_on_random_points(self):
        rng = random.Random(7)
        polygon = [
            (0.0, 0.0), (4.0, 0.0), (4.0, 2.0), (2.0, 2.0),
            (2.0, 4.0), (4.0, 4.0), (4.0, 6.0), (0.0, 6.0), (0.0, 0.0),
        ]  # a C-shape: concavity matters
        for _ in range(2000):
            lon = rng.uniform(-1, 5)
            lat = rng.uniform(-1, 7)
            assert point_in_rings(lon, lat, [polygon]) == oracle_even_odd(lon, lat, [polygon])


@pytest.fixture(scope="module")
def county_index():
    return load_geometry(FIXTURES / "geometry_county.geojson", GeoLevel.COUNTY)


class TestLocateInRegion:
    def test_strictly_inside(self, county_index):
        assert locate_in_region((10.2, 30.2), county_index) == "ts/norlandia/ulm"
        assert locate_in_region((10.5, 30.6), county_index) == "ts/norlandia/vey"

    def test_ocean_is_absent(self, county_index):
        assert locate_in_region((0.0, 0.0), county_index) is None

    def test_shared_border_takes_smaller_id(self, county_index):
        # lon=30.4 is the shared edge; both polygons contain it per the oracle
        lat, lon = 10.5, 30.4
        for rid in ("ts/norlandia/ulm", "ts/norlandia/vey"):
            assert oracle_even_odd(lon, lat, [list(r) for r in county_index.rings_for(rid)])
        assert locate_in_region((lat, lon), county_index) == "ts/norlandia/ulm"

    def test_agrees_with_oracle_everywhere(self, county_index):
        rng = random.Random(11)
        shapes = {rid: county_index.rings_for(rid) for rid in county_index.region_ids()}
        for _ in range(1500):
            lat = rng.uniform(9.5, 11.5)
            lon = rng.uniform(29.5, 31.5)
            expected = None
            for rid in sorted(shapes):
                if oracle_even_odd(lon, lat, [list(r) for r in shapes[rid]]):
                    expected = rid
                    break
            assert locate_in_region((lat, lon), county_index) == expected

    def test_open_ring_rejected(self):
        with pytest.raises(ValidationError):
            GeometryIndex(GeoLevel.COUNTY, {"r": [[(0.0, 0.0), (1.0, 0.0), (1.0, 1.0)]]})
