import pytest
from hypothesis import given
from hypothesis import strategies as st

from eqloss.errors import CurveValidationError, ValidationError
from eqloss.vulnerability import MdrCurve, load_mdr_curves, mmi_to_mdr

CURVE = MdrCurve("ts", {5: 0.0, 6: 0.01, 7: 0.05, 8: 0.15, 9: 0.3, 10: 0.5})


class TestMmiToMdr:
    def test_integer_mmi_is_exact_table_value(self):
        for mmi, mdr in CURVE.entries.items():
            assert mmi_to_mdr(float(mmi), CURVE) == mdr

    def test_half_step_is_midpoint(self):
        assert mmi_to_mdr(7.5, CURVE) == pytest.approx((0.05 + 0.15) / 2, abs=1e-15)

    def test_above_range_clamps(self):
        short = MdrCurve("x", {5: 0.0, 6: 0.01, 7: 0.05, 8: 0.15, 9: 0.3, 10: 0.45, 11: 0.6})
        assert mmi_to_mdr(11.5, short) == 0.6

    def test_below_range_is_zero(self):
        positive_floor = MdrCurve("x", {6: 0.02, 7: 0.05})
        assert mmi_to_mdr(5.0, positive_floor) == 0.0
        assert mmi_to_mdr(2.0, CURVE) == 0.0

    def test_out_of_domain_rejected(self):
        with pytest.raises(ValidationError):
            mmi_to_mdr(12.7, CURVE)
        with pytest.raises(ValidationError):
            mmi_to_mdr(0.5, CURVE)

    @given(st.floats(min_value=1.0, max_value=12.0))
    def test_monotone(self, m):
        eps = 1e-6
        hi = min(m + eps, 12.0)
        assert mmi_to_mdr(m, CURVE) <= mmi_to_mdr(hi, CURVE) + 1e-15

    @given(st.floats(min_value=5.0, max_value=10.0))
    def test_continuous_within_defined_range(self, m):
        eps = 1e-6
        hi = min(m + eps, 10.0)
        # steepest segment bounds the local change
        lipschitz = max(
            CURVE.entries[i + 1] - CURVE.entries[i] for i in range(5, 10)
        )
        assert abs(mmi_to_mdr(hi, CURVE) - mmi_to_mdr(m, CURVE)) <= lipschitz * eps + 1e-15

    @given(st.floats(min_value=1.0, max_value=12.0), st.floats(min_value=1.0, max_value=12.0))
    def test_monotone_any_pair(self, m1, m2):
        lo, hi = sorted((m1, m2))
        assert mmi_to_mdr(lo, CURVE) <= mmi_to_mdr(hi, CURVE)


class TestCurveValidation:
    def test_decreasing_rejected(self):
        with pytest.raises(CurveValidationError):
            MdrCurve("x", {6: 0.05, 7: 0.01})

    def test_gap_rejected(self):
        with pytest.raises(CurveValidationError):
            MdrCurve("x", {5: 0.0, 7: 0.05})

    def test_mdr_outside_unit_interval_rejected(self):
        with pytest.raises(CurveValidationError):
            MdrCurve("x", {6: 1.2})

    def test_empty_rejected(self):
        with pytest.raises(ValidationError):
            MdrCurve("x", {})


class TestLoadCurves:
    def test_two_rows(self, tmp_path):
        path = tmp_path / "curves.csv"
        path.write_text("country,mmi,mdr\nus,6,0.0\nus,7,0.01\n")
        curves = load_mdr_curves(path)
        assert curves["us"].entries == {6: 0.0, 7: 0.01}

    def test_empty_file_gives_empty_set(self, tmp_path):
        path = tmp_path / "curves.csv"
        path.write_text("country,mmi,mdr\n")
        assert load_mdr_curves(path) == {}

    def test_decreasing_rows_rejected(self, tmp_path):
        path = tmp_path / "curves.csv"
        path.write_text("country,mmi,mdr\nus,6,0.10\nus,7,0.01\n")
        with pytest.raises(CurveValidationError) as err:
            load_mdr_curves(path)
        assert "us" in str(err.value)

    def test_shipped_file_loads(self, curves):
        assert {"us", "jp", "cl", "mx", "nz", "ts"} <= set(curves)
        for curve in curves.values():
            assert curve.lowest <= 5 and curve.highest >= 10
