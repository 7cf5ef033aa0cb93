from pathlib import Path

import pytest

from eqloss.config import AppConfig
from eqloss.geometry import load_geometry
from eqloss.ingest import load_gazetteer
from eqloss.model import GeoHierarchy, GeoLevel
from eqloss.vulnerability import load_mdr_curves

FIXTURES = Path(__file__).parent / "fixtures"
DATA = Path(__file__).parent.parent / "data"


def pytest_runtest_logreport(report):
    # one visible verdict line per acceptance criterion
    if report.when == "call" and "test_acceptance" in report.nodeid:
        outcome = "PASS" if report.passed else ("FAIL" if report.failed else "SKIP")
        name = report.nodeid.split("::")[-1]
        print(f"[ACCEPTANCE] {outcome} :: {name}")


@pytest.fixture(scope="session")
def curves():
    return load_mdr_curves(DATA / "mdr_curves.csv")


@pytest.fixture(scope="session")
def demo_hierarchy():
    return GeoHierarchy(load_gazetteer(FIXTURES / "gazetteer_demo.csv").centres)


@pytest.fixture(scope="session")
def geometry_indexes():
    return {
        GeoLevel.COUNTY: load_geometry(FIXTURES / "geometry_county.geojson", GeoLevel.COUNTY),
        GeoLevel.STATE: load_geometry(FIXTURES / "geometry_state.geojson", GeoLevel.STATE),
        GeoLevel.COUNTRY: load_geometry(FIXTURES / "geometry_country.geojson", GeoLevel.COUNTRY),
    }


@pytest.fixture
def demo_store(demo_hierarchy, curves):
    from eqloss.ingest import ingest_exposure
    from eqloss.store import ElevDb

    store = ElevDb(":memory:")
    store.load_hierarchy(demo_hierarchy)
    store.put_curves(curves)
    store.put_exposure(ingest_exposure(FIXTURES / "exposure_demo.csv", demo_hierarchy))
    yield store
    store.close()


@pytest.fixture
def service_config(tmp_path):
    return AppConfig(
        data_dir=tmp_path / "var",
        store_path=str(tmp_path / "var" / "elev.sqlite"),
        kml_dir=tmp_path / "var" / "kml",
        gazetteer_file=FIXTURES / "gazetteer_demo.csv",
        exposure_file=FIXTURES / "exposure_demo.csv",
        curve_file=DATA / "mdr_curves.csv",
        economic_series_file=DATA / "economic_series.csv",
        geometry_files={
            GeoLevel.COUNTY: FIXTURES / "geometry_county.geojson",
            GeoLevel.STATE: FIXTURES / "geometry_state.geojson",
            GeoLevel.COUNTRY: FIXTURES / "geometry_country.geojson",
        },
    )


@pytest.fixture
def client(service_config):
    from fastapi.testclient import TestClient

    from eqloss.service import build_context, create_app

    context = build_context(service_config)
    app = create_app(context)
    with TestClient(app) as test_client:
        yield test_client
    context.store.close()
