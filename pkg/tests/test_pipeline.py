from decimal import Decimal
from pathlib import Path

import pytest

from eqloss.errors import DuplicateAlertError, MissingCurveError
from eqloss.loss import LineOfBusiness
from eqloss.model import GeoLevel
from eqloss.pipeline import run_estimation
from eqloss.store import ElevDb

FIXTURES = Path(__file__).parent / "fixtures"


def run_demo(store, curves, name="pager_demo_a1.xml", geometry=None, replace=False):
    return run_estimation(store, (FIXTURES / name).read_text(), curves, geometry, replace=replace)


class TestDemoEstimation:
    def test_country_totals_frozen(self, demo_store, curves):
        result = run_demo(demo_store, curves)
        gul, nfl = result.country_totals
        # frozen from the independent Decimal oracle
        assert gul == Decimal("105.798461538")
        assert nfl == Decimal("70.532307693")

    def test_county_split_frozen(self, demo_store, curves):
        run_demo(demo_store, curves)
        rows = demo_store.query_losses("tsdemo2024", 1, GeoLevel.COUNTY)
        by_unit = {}
        for r in rows:
            g, n = by_unit.get(r.unit[1], (Decimal(0), Decimal(0)))
            by_unit[r.unit[1]] = (g + r.gul.value, n + r.nfl.value)
        assert by_unit["ts/norlandia/ulm"] == (Decimal("31.218461538"), Decimal("20.812307692"))
        assert by_unit["ts/norlandia/vey"] == (Decimal("74.580000000"), Decimal("49.720000001"))

    def test_per_lob_country_rows_frozen(self, demo_store, curves):
        run_demo(demo_store, curves)
        rows = demo_store.query_losses("tsdemo2024", 1, GeoLevel.COUNTRY)
        by_lob = {r.line_of_business: r.gul.value for r in rows}
        assert by_lob[LineOfBusiness.INDUSTRIAL] == Decimal("57.692307692")
        assert by_lob[LineOfBusiness.PERSONAL] == Decimal("28.846153846")
        assert by_lob[LineOfBusiness.COMMERCIAL] == Decimal("10.680000000")
        assert by_lob[LineOfBusiness.OTHER] == Decimal("8.580000000")

    def test_conservation_across_levels(self, demo_store, curves):
        run_demo(demo_store, curves)
        totals = []
        for level in (GeoLevel.CITY, GeoLevel.COUNTY, GeoLevel.STATE, GeoLevel.COUNTRY):
            rows = demo_store.query_losses("tsdemo2024", 1, level)
            totals.append(sum(r.gul.value for r in rows))
        assert totals[0] == totals[1] == totals[2] == totals[3]

    def test_state_hazard_and_mdr(self, demo_store, curves):
        result = run_demo(demo_store, curves)
        assert result.hazard.values[(GeoLevel.STATE, "ts/norlandia")] == pytest.approx(452500 / 65000, rel=1e-12)
        assert result.mdr_values[(GeoLevel.STATE, "ts/norlandia")] == pytest.approx(
            0.01 + (452500 / 65000 - 6) * 0.04, rel=1e-12
        )

    def test_duplicate_version_rejected(self, demo_store, curves):
        run_demo(demo_store, curves)
        with pytest.raises(DuplicateAlertError):
            run_demo(demo_store, curves)

    def test_replace_reruns(self, demo_store, curves):
        first = run_demo(demo_store, curves)
        second = run_demo(demo_store, curves, replace=True)
        assert first.country_totals == second.country_totals
        assert len(demo_store.list_alerts("tsdemo2024")) == 1

    def test_second_version_coexists(self, demo_store, curves):
        run_demo(demo_store, curves)
        run_demo(demo_store, curves, name="pager_demo_a2.xml")
        versions = [a.version for a in demo_store.list_alerts("tsdemo2024")]
        assert versions == [1, 2]
        v1 = demo_store.query_losses("tsdemo2024", 1, GeoLevel.COUNTRY)
        v2 = demo_store.query_losses("tsdemo2024", 2, GeoLevel.COUNTRY)
        assert sum(r.gul.value for r in v2) > sum(r.gul.value for r in v1)

    def test_missing_curve_fails_estimation(self, demo_store):
        from eqloss.vulnerability import MdrCurve

        only_jp = {"jp": MdrCurve("jp", {5: 0.0, 6: 0.01, 7: 0.05})}
        with pytest.raises(MissingCurveError) as err:
            run_demo(demo_store, only_jp)
        assert err.value.country == "ts"


class TestTohokuSequence:
    def test_alerts_without_gazetteer_resolve_via_embedded_parents(self, demo_store, curves):
        result = run_demo(demo_store, curves, name="pager_tohoku_a1.xml")
        assert result.alert_version == 1
        # Japan has no county layer; states aggregate directly from cities
        assert result.hazard.at_level(GeoLevel.COUNTY) == {}
        assert len(result.hazard.at_level(GeoLevel.STATE)) == 14
        assert (GeoLevel.COUNTRY, "jp") in result.hazard.values
        # no exposure configured for jp: zero losses, still a valid run
        gul, nfl = result.country_totals
        assert gul == 0 and nfl == 0

    def test_replayed_sequence_keeps_versions(self, demo_store, curves):
        run_demo(demo_store, curves, name="pager_tohoku_a1.xml")
        run_demo(demo_store, curves, name="pager_tohoku_a3.xml")
        run_demo(demo_store, curves, name="pager_tohoku_a5.xml")
        alerts = demo_store.list_alerts("usc0001xgp")
        assert [a.version for a in alerts] == [1, 3, 5]
        assert [a.magnitude for a in alerts] == [7.9, 8.8, 8.9]

    def test_magnitude_update_with_same_mmi_keeps_hazard(self, demo_store, curves):
        r1 = run_demo(demo_store, curves, name="pager_tohoku_a1.xml")
        r3 = run_demo(demo_store, curves, name="pager_tohoku_a3.xml")
        assert r1.hazard.values == {
            (lv, u): v for (lv, u), v in r3.hazard.values.items()
        }

    def test_loss_evolution_with_exposure(self, curves):
        from eqloss.ingest import ingest_exposure, load_gazetteer
        from eqloss.model import GeoHierarchy

        store = ElevDb(":memory:")
        hierarchy = GeoHierarchy(load_gazetteer(FIXTURES / "gazetteer_tohoku.csv").centres)
        store.load_hierarchy(hierarchy)
        store.put_exposure(ingest_exposure(FIXTURES / "exposure_tohoku.csv", hierarchy))
        r1 = run_demo(store, curves, name="pager_tohoku_a1.xml")
        r3 = run_demo(store, curves, name="pager_tohoku_a3.xml")
        r5 = run_demo(store, curves, name="pager_tohoku_a5.xml")
        # magnitude-only update leaves losses alone; revised intensities move them
        assert r3.country_totals == r1.country_totals
        assert r5.country_totals[0] > r3.country_totals[0]
        assert [a.magnitude for a in store.list_alerts("usc0001xgp")] == [7.9, 8.8, 8.9]


class TestGeometryFallback:
    def test_city_without_parents_located_in_polygons(self, demo_store, curves, geometry_indexes):
        text = (
            '<pager_event id="geotest" version="1" magnitude="6" '
            'origin_time="2024-01-01T00:00:00Z" lat="10.2" lon="30.2">'
            '<city name="Newtown" lat="10.22" lon="30.18" population="4000" mmi="6.5"/>'
            "</pager_event>"
        )
        result = run_estimation(demo_store, text, curves, geometry_indexes)
        assert (GeoLevel.COUNTY, "ts/norlandia/ulm") in result.hazard.values
        assert (GeoLevel.COUNTRY, "ts") in result.hazard.values

    def test_unresolvable_city_dropped_and_counted(self, demo_store, curves):
        text = (
            '<pager_event id="geotest2" version="1" magnitude="6" '
            'origin_time="2024-01-01T00:00:00Z" lat="0" lon="0">'
            '<city name="Nowhere" lat="-60.0" lon="-120.0" population="4000" mmi="6.5"/>'
            "</pager_event>"
        )
        result = run_estimation(demo_store, text, curves)
        assert result.report.unresolved_centres == 1
        assert result.hazard.values == {}


class TestWatcher:
    def test_two_drops_two_runs(self, demo_store, curves, tmp_path):
        from eqloss.watcher import poll_once

        drop = tmp_path / "drop"
        drop.mkdir()
        (drop / "a1.xml").write_text((FIXTURES / "pager_demo_a1.xml").read_text())
        (drop / "a2.xml").write_text((FIXTURES / "pager_demo_a2.xml").read_text())
        handler = lambda text: run_estimation(demo_store, text, curves)
        state = poll_once(drop, handler)
        assert state.processed == ["a1.xml", "a2.xml"]
        assert [a.version for a in demo_store.list_alerts("tsdemo2024")] == [1, 2]

    def test_duplicate_drop_ignored_with_audit_entry(self, demo_store, curves, tmp_path, caplog):
        import logging

        from eqloss.watcher import poll_once

        drop = tmp_path / "drop"
        drop.mkdir()
        (drop / "a1.xml").write_text((FIXTURES / "pager_demo_a1.xml").read_text())
        (drop / "a1_copy.xml").write_text((FIXTURES / "pager_demo_a1.xml").read_text())
        handler = lambda text: run_estimation(demo_store, text, curves)
        with caplog.at_level(logging.INFO, logger="eqloss.watcher"):
            state = poll_once(drop, handler)
        assert state.processed == ["a1.xml"]
        assert state.report.duplicates_ignored == 1
        assert any("duplicate" in r.message for r in caplog.records)
        assert len(demo_store.list_alerts("tsdemo2024")) == 1

    def test_malformed_file_quarantined_pipeline_continues(self, demo_store, curves, tmp_path):
        from eqloss.watcher import poll_once

        drop = tmp_path / "drop"
        drop.mkdir()
        (drop / "a_bad.xml").write_text((FIXTURES / "pager_malformed.xml").read_text())
        (drop / "b_good.xml").write_text((FIXTURES / "pager_demo_a1.xml").read_text())
        handler = lambda text: run_estimation(demo_store, text, curves)
        state = poll_once(drop, handler)
        assert state.report.quarantined == 1
        assert (drop / "errors" / "a_bad.xml").is_file()
        assert not (drop / "a_bad.xml").exists()
        assert state.processed == ["b_good.xml"]

    def test_reingesting_same_document_is_noop(self, demo_store, curves, tmp_path):
        from eqloss.watcher import poll_once

        drop = tmp_path / "drop"
        drop.mkdir()
        (drop / "a1.xml").write_text((FIXTURES / "pager_demo_a1.xml").read_text())
        handler = lambda text: run_estimation(demo_store, text, curves)
        state = poll_once(drop, handler)
        before = demo_store.query_losses("tsdemo2024", 1, GeoLevel.COUNTRY)
        state = poll_once(drop, handler, state)  # same file again: skipped by name
        (drop / "a1_replay.xml").write_text((FIXTURES / "pager_demo_a1.xml").read_text())
        state = poll_once(drop, handler, state)  # same content, new name: duplicate
        after = demo_store.query_losses("tsdemo2024", 1, GeoLevel.COUNTRY)
        assert before == after
        assert state.report.duplicates_ignored == 1
