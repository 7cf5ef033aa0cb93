import math
from decimal import Decimal
from pathlib import Path

import pytest
from scipy.integrate import quad

from eqloss import analytics
from eqloss.analytics import (
    DEFAULT_LADDER,
    EconomicSeries,
    LossDistribution,
    LossThreshold,
    NormalizationMultipliers,
    SeriesPoint,
    icw_multiplier,
    inflation_multiplier,
    load_economic_series,
    multipliers_for_year,
    normalize_loss,
    percent_error,
    population_multiplier,
    std_normal_cdf,
    threshold_bin,
    threshold_probability,
    wealth_multiplier,
)
from eqloss.errors import ConsistencyError, MissingDataError, OutOfRangeError, UndefinedValueError, ValidationError
from eqloss.model import MonetaryAmount

DATA = Path(__file__).parent.parent / "data"


@pytest.fixture(scope="module")
def us_series():
    return load_economic_series(DATA / "economic_series.csv")["us"]


def usd(text, year):
    return MonetaryAmount(Decimal(text), year)


class TestMultipliers:
    def test_inflation_2010(self, us_series):
        assert inflation_multiplier(us_series, 2010) == pytest.approx(1.0352, abs=1e-4)

    def test_inflation_identity(self):
        series = EconomicSeries("x", {2010: SeriesPoint(100, 1, 1, 1), 2012: SeriesPoint(100, 1, 1, 1)})
        assert inflation_multiplier(series, 2010) == 1.0

    def test_inflation_same_year(self, us_series):
        assert inflation_multiplier(us_series, 2012) == 1.0

    def test_inflation_missing_year(self, us_series):
        with pytest.raises(MissingDataError):
            inflation_multiplier(us_series, 1895)

    def test_icw_2010(self, us_series):
        assert icw_multiplier(us_series, 2010) == pytest.approx(0.9850, abs=1e-4)

    def test_icw_cancellation(self):
        series = EconomicSeries("x", {2010: SeriesPoint(1, 100, 500, 1), 2012: SeriesPoint(1, 120, 600, 1)})
        assert icw_multiplier(series, 2010) == pytest.approx(1.0, rel=1e-12)

    def test_icw_flat_cpi_wealth_doubles(self):
        series = EconomicSeries("x", {2010: SeriesPoint(1, 100, 500, 1), 2012: SeriesPoint(1, 100, 1000, 1)})
        assert icw_multiplier(series, 2010) == pytest.approx(2.0, rel=1e-12)

    def test_population_2010(self, us_series):
        assert population_multiplier(us_series, 2010) == pytest.approx(1.0172, abs=1e-4)

    def test_population_equal(self):
        series = EconomicSeries("x", {2010: SeriesPoint(1, 1, 1, 5000), 2012: SeriesPoint(1, 1, 1, 5000)})
        assert population_multiplier(series, 2010) == 1.0

    def test_population_halves(self):
        series = EconomicSeries("x", {2010: SeriesPoint(1, 1, 1, 10000), 2012: SeriesPoint(1, 1, 1, 5000)})
        assert population_multiplier(series, 2010) == 0.5

    def test_wealth_from_icw_and_pop(self):
        assert wealth_multiplier(0.9850, 1.0172) == pytest.approx(0.9683, abs=1e-4)
        assert wealth_multiplier(1.0, 2.0) == 0.5
        assert wealth_multiplier(1.5, 1.5) == 1.0

    def test_full_set_is_consistent(self, us_series):
        m = multipliers_for_year(us_series, 2010)
        assert m.consistency_gap() <= 1e-12


class TestNormalizeLoss:
    def test_ferndale_worked_example(self):
        m = NormalizationMultipliers(ipd=1.0352, wealth=0.9683, pop=1.0172, icw=0.9850)
        out = normalize_loss(usd("25.0", 2010), m, consistency_tol=1e-3)
        assert float(out.value) == pytest.approx(25.4904, abs=0.0005)
        assert out.reference_year == 2012

    def test_chile_row(self):
        # printed multipliers are 4-decimal roundings, so the product lands
        # within 0.05% of the printed total rather than on it
        m = NormalizationMultipliers(ipd=1.0558, wealth=0.9651, pop=1.0318, icw=0.9957)
        out = normalize_loss(usd("16.0500", 2010), m, consistency_tol=1e-3)
        assert float(out.value) == pytest.approx(16.8732, rel=5e-4)

    def test_identity_multipliers(self):
        m = NormalizationMultipliers(ipd=1.0, wealth=1.0, pop=1.0)
        out = normalize_loss(usd("123.456", 1999), m)
        assert float(out.value) == pytest.approx(123.456, rel=1e-12)

    def test_two_product_forms_agree(self, us_series):
        m = multipliers_for_year(us_series, 2010)
        d = 25.0
        eq2 = d * m.ipd * m.wealth * m.pop
        eq2a = d * m.ipd * m.effective_icw
        assert eq2 == pytest.approx(eq2a, rel=1e-6)

    def test_inconsistent_set_rejected(self):
        m = NormalizationMultipliers(ipd=1.0, wealth=1.0, pop=1.0, icw=1.5)
        with pytest.raises(ConsistencyError):
            normalize_loss(usd("1", 2010), m)


class TestPercentError:
    def test_chile(self):
        assert percent_error(usd("238.8136", 2012), usd("16.8732", 2012)) == pytest.approx(1315.33, abs=0.05)

    def test_ferndale(self):
        assert percent_error(usd("16.8655", 2012), usd("25.4904", 2012)) == pytest.approx(-33.84, abs=0.05)

    def test_equal_is_zero(self):
        assert percent_error(usd("5", 2012), usd("5", 2012)) == 0.0

    def test_zero_normalized_rejected(self):
        with pytest.raises(UndefinedValueError):
            percent_error(usd("5", 2012), usd("0", 2012))

    def test_year_mismatch_rejected(self):
        with pytest.raises(ValidationError):
            percent_error(usd("5", 2012), usd("5", 2010))


class TestStdNormalCdf:
    def test_against_erf_reference(self):
        # reference built on erf, production on erfc
        x = -8.0
        while x <= 8.0:
            reference = 0.5 * (1.0 + math.erf(x / math.sqrt(2.0)))
            assert abs(std_normal_cdf(x) - reference) <= 1e-12
            x += 1e-3 * 16  # 1e-3 grid thinned 16x here; acceptance runs the full grid

    def test_centre_is_half(self):
        assert abs(std_normal_cdf(0.0) - 0.5) <= 1e-15


class TestThresholdProbability:
    def test_degenerate_interval_vanishes(self):
        dist = LossDistribution(mu_ln_loss=math.log(25.0), zeta=0.6)
        for eps in (1e-3, 1e-6, 1e-9):
            p = threshold_probability(dist, LossThreshold(25.0, 25.0 + eps))
            assert p < 1e-2 * eps ** 0.5 + 1e-4
        assert threshold_probability(dist, LossThreshold(25.0, 25.0 + 1e-12)) == pytest.approx(0.0, abs=1e-9)

    def test_median_splits_mass(self):
        for zeta in (0.1, 0.6, 2.5):
            dist = LossDistribution(mu_ln_loss=math.log(25.49), zeta=zeta)
            assert threshold_probability(dist, LossThreshold(0.0, 25.49)) == pytest.approx(0.5, abs=1e-12)

    def test_buckets_match_quadrature(self):
        mu, zeta = math.log(25.49), 0.6
        dist = LossDistribution(mu_ln_loss=mu, zeta=zeta)

        def lognormal_pdf(x):
            return math.exp(-((math.log(x) - mu) ** 2) / (2 * zeta**2)) / (x * zeta * math.sqrt(2 * math.pi))

        for t in DEFAULT_LADDER:
            expected, err = quad(lognormal_pdf, max(t.lower, 1e-12), t.upper, limit=200)
            assert threshold_probability(dist, t) == pytest.approx(expected, abs=max(1e-6, 10 * err))

    def test_ladder_telescopes(self):
        dist = LossDistribution(mu_ln_loss=math.log(25.49), zeta=0.6)
        total = sum(threshold_probability(dist, t) for t in DEFAULT_LADDER)
        top = std_normal_cdf((math.log(DEFAULT_LADDER[-1].upper) - dist.mu_ln_loss) / dist.zeta)
        assert total == pytest.approx(top, abs=1e-12)

    def test_buckets_non_negative_cumulative_non_decreasing(self):
        dist = LossDistribution(mu_ln_loss=math.log(400.0), zeta=0.6)
        running = 0.0
        for t in DEFAULT_LADDER:
            p = threshold_probability(dist, t)
            assert p >= 0.0
            assert running + p >= running
            running += p


class TestThresholdBin:
    def test_2549_lands_in_decade_three(self):
        assert threshold_bin(25.49) == 2  # the (10, 100] bucket

    def test_chile_rows_differ(self):
        assert threshold_bin(16.87) != threshold_bin(238.81)

    def test_upper_inclusive(self):
        assert threshold_bin(100.0) == 2
        assert threshold_bin(100.0000001) == 3

    def test_above_ladder_rejected(self):
        with pytest.raises(OutOfRangeError):
            threshold_bin(2_000_000.0)

    def test_monetary_amount_accepted(self):
        assert threshold_bin(usd("25.49", 2012)) == 2


class TestHistoricTable:
    def test_load_shape(self):
        rows = analytics.load_historic_events(DATA / "table1_earthquakes.csv")
        assert len(rows) == 12
        combined = [r for r in rows if r.is_combined]
        assert len(combined) == 1 and combined[0].region == "Sierra El Mayor"

    def test_validation_report(self):
        rows = analytics.load_historic_events(DATA / "table1_earthquakes.csv")
        report = analytics.validate_historic_events(rows)
        assert report.event_count == 10
        assert report.same_bin_count == 5
        part_sum, combined = report.combined_sums["Sierra El Mayor"]
        assert part_sum == pytest.approx(combined, abs=0.001)
