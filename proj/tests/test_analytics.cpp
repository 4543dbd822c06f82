#include "doctest.h"

#include "ridesim/error.hpp"
#include "ridesim/extrapolation.hpp"
#include "ridesim/kpi.hpp"
#include "ridesim/random.hpp"
#include "ridesim/validation.hpp"

#include <cmath>
#include <sstream>

using namespace ridesim;

namespace {

TaggedRun run(const std::string& day, Strategy s, std::uint64_t seed, std::int64_t pickup_km, std::int64_t ride_km,
              std::int64_t reb_km)
{
    TaggedRun r;
    r.day = day;
    r.strategy = s;
    r.seed = seed;
    r.kpis.pickup_mm = pickup_km * 1000000;
    r.kpis.ride_mm = ride_km * 1000000;
    r.kpis.rebalancing_mm = reb_km * 1000000;
    r.kpis.emissions.grams[0] = 100.0 * static_cast<double>(pickup_km + ride_km + reb_km);
    r.kpis.shifts = 10;
    r.kpis.shift_duration_ms = 10 * 3600000LL * 6;
    r.kpis.orders = r.kpis.served = 40;
    return r;
}

SimOutput outcome(const std::vector<std::pair<std::string, std::pair<SimTime, SimTime>>>& rides)
{
    SimOutput out;
    for (const auto& [id, t] : rides) {
        OrderOutcome o;
        o.order_id = id;
        o.pickup_ms = t.first;
        o.dropoff_ms = t.second;
        out.orders.push_back(o);
    }
    return out;
}

RideOrder reference(const std::string& id, std::int64_t pickup_s, std::int64_t dropoff_s)
{
    RideOrder r;
    r.order_id = id;
    r.order_time = {pickup_s - 300, 3600};
    r.pickup_time = {pickup_s, 3600};
    r.dropoff_time = {dropoff_s, 3600};
    return r;
}

double cell(const ExtrapolationTable& t, std::size_t row, double ExtrapolationRow::*field)
{
    return t.rows.at(row).*field;
}

} // namespace

TEST_CASE("format_delta")
{
    CHECK(format_delta(11127.0 / 14724.0 - 1.0) == "-24%");
    CHECK(format_delta(0.14) == "+14%");
    CHECK(format_delta(0.0) == "0%");
    CHECK(format_delta(-0.004) == "0%");
    CHECK(format_delta(-1.0) == "-100%");
    CHECK(format_delta(std::nullopt) == "n/a");
}

TEST_CASE("KPI table")
{
    const std::vector<TaggedRun> runs{
        run("wednesday", Strategy::Return, 1, 100, 200, 80), run("wednesday", Strategy::Return, 2, 120, 200, 120),
        run("wednesday", Strategy::Hotspot, 1, 130, 200, 50), run("wednesday", Strategy::Hotspot, 2, 130, 200, 50),
        run("wednesday", Strategy::Wait, 1, 150, 200, 0),
    };
    const KpiTable t = build_kpi_table(runs);
    REQUIRE(t.strategies.size() == 3);
    CHECK(t.strategies[0] == Strategy::Return);

    const KpiCell* base = t.find("wednesday", Strategy::Return);
    REQUIRE(base);
    CHECK(base->variations == 2);
    CHECK(base->value(KpiMetric::RebalancingMileage) == doctest::Approx(100.0));
    CHECK(base->value(KpiMetric::TotalMileage) == doctest::Approx(410.0));
    CHECK(base->value(KpiMetric::Co2Rate) == doctest::Approx(100.0));
    CHECK(base->value(KpiMetric::MileagePerShift) == doctest::Approx(41.0));
    CHECK(base->value(KpiMetric::ShiftDuration) == doctest::Approx(6.0));
    for (const auto& d : base->delta) {
        REQUIRE(d);
        CHECK(*d == 0.0);
    }

    const KpiCell* hs = t.find("wednesday", Strategy::Hotspot);
    REQUIRE(hs);
    CHECK(*hs->delta[static_cast<std::size_t>(KpiMetric::RebalancingMileage)] == doctest::Approx(-0.5));
    CHECK(format_delta(hs->delta[static_cast<std::size_t>(KpiMetric::RebalancingMileage)]) == "-50%");
    CHECK(*hs->delta[static_cast<std::size_t>(KpiMetric::RideMileage)] == 0.0);
    // exact identity on the summed integers
    CHECK(hs->total_mm() == hs->pickup_mm + hs->ride_mm + hs->rebalancing_mm);

    const KpiCell* wait = t.find("wednesday", Strategy::Wait);
    REQUIRE(wait);
    CHECK(format_delta(wait->delta[static_cast<std::size_t>(KpiMetric::RebalancingMileage)]) == "-100%");

    std::ostringstream csv;
    write_kpi_csv(csv, t);
    CHECK(csv.str().find("-50%") != std::string::npos);

    const std::vector<TaggedRun> no_base{run("saturday", Strategy::Wait, 1, 1, 1, 0)};
    CHECK_THROWS_AS(build_kpi_table(no_base), DataError);
}

TEST_CASE("validation metrics")
{
    SUBCASE("identical timings")
    {
        const std::vector<RideOrder> ref{reference("a", 1000, 1600), reference("b", 2000, 2900)};
        const SimOutput out = outcome({{"a", {1000000, 1600000}}, {"b", {2000000, 2900000}}});
        const ValidationReport r = validation_metrics(out, ref);
        CHECK(r.travel_time_median_s == 0.0);
        CHECK(r.pickup_median_s == 0.0);
        CHECK(r.travel_time_share_below == 1.0);
        CHECK(r.matched_ids.size() == 2);
        CHECK(r.unmatched.empty());
    }
    SUBCASE("every ride 100 s slower")
    {
        const std::vector<RideOrder> ref{reference("a", 1000, 1600), reference("b", 2000, 2900),
                                         reference("c", 5000, 5100)};
        const SimOutput out =
            outcome({{"a", {1000000, 1700000}}, {"b", {2000000, 3000000}}, {"c", {5000000, 5200000}}, {"x", {0, 1}}});
        const ValidationReport r = validation_metrics(out, ref);
        CHECK(r.travel_time_median_s == 100.0);
        CHECK(r.travel_time_share_below == 1.0);
        REQUIRE(r.unmatched.size() == 1);
        CHECK(r.unmatched[0] == "x");
    }
    SUBCASE("hand-made differences")
    {
        const ValidationReport r = report_from_diffs({-300, -50, 0, 150, 400}, {}, 200.0);
        CHECK(r.travel_time_median_s == 0.0);
        CHECK(r.travel_time_share_below == doctest::Approx(3.0 / 5.0));
        CHECK(r.pickup_median_s == 0.0);
        // strict inequality at the threshold
        CHECK(share_abs_below(std::vector<double>{200.0, -200.0}, 200.0) == 0.0);
        CHECK(median({4.0, 1.0, 3.0, 2.0}) == 2.5);
    }
    SUBCASE("share grows with the threshold")
    {
        Rng rng(4);
        std::vector<double> v;
        for (int i = 0; i < 500; ++i) {
            v.push_back(standard_normal(rng) * 150.0);
        }
        double last = 0.0;
        for (double th = 0.0; th <= 1000.0; th += 25.0) {
            const double s = share_abs_below(v, th);
            CHECK(s >= last);
            last = s;
        }
        CHECK(last == 1.0);
    }
}

TEST_CASE("annual extrapolation")
{
    const std::int64_t wed = day_number_from_civil(2023, 1, 4);
    const std::int64_t sat = day_number_from_civil(2023, 1, 7);
    const StrategyAdjustment none{"return", {}, {}};

    SUBCASE("no days, no mileage")
    {
        ExtrapolationInputs in;
        const auto t = extrapolate_annual(in, std::span(&none, 1));
        CHECK(t.rows[0].s_total == 0.0);
        CHECK(t.rows[0].e_kg == 0.0);
    }
    SUBCASE("one day")
    {
        ExtrapolationInputs in;
        in.completion_factor = 1.0;
        in.days = {{wed, 10.0, 0.5, 100.0, 60.0, 40.0}};
        const auto t = extrapolate_annual(in, std::span(&none, 1));
        CHECK(t.rows[0].s_total == doctest::Approx(1000.0));
        CHECK(t.rows[0].e_kg == doctest::Approx(1000.0 * 102.35 / 1000.0));
    }
    SUBCASE("weekday and weekend adjustments, linear in the inputs")
    {
        ExtrapolationInputs in;
        in.days = {{wed, 40.0, 0.5, 50.0, 100.0, 30.0}, {sat, 42.0, 0.8, 60.0, 110.0, 35.0}};
        const std::vector<StrategyAdjustment> adj{
            none, {"hotspot", {0.1, 0.0, -0.8}, {0.2, 0.0, -0.75}}, {"wait", {0.5, 0.0, -1.0}, {0.4, 0.0, -1.0}}};
        const auto t = extrapolate_annual(in, adj);
        const double c = 1.17;
        const double hs_b = c * (20.0 * 30.0 * 0.2 + 0.8 * 42.0 * 35.0 * 0.25);
        CHECK(t.rows[1].s_rebalancing == doctest::Approx(hs_b));
        CHECK(t.rows[2].s_rebalancing == 0.0);
        CHECK(t.rows[1].s_ride == doctest::Approx(t.rows[0].s_ride));
        CHECK(t.rows[1].delta_s == doctest::Approx(t.rows[0].s_total - t.rows[1].s_total));

        ExtrapolationInputs doubled = in;
        for (auto& d : doubled.days) {
            d.fleet_size *= 2.0;
        }
        const auto t2 = extrapolate_annual(doubled, adj);
        for (std::size_t i = 0; i < t.rows.size(); ++i) {
            CHECK(t2.rows[i].s_total == doctest::Approx(2.0 * t.rows[i].s_total));
        }
    }
    SUBCASE("invalid inputs")
    {
        ExtrapolationInputs in;
        in.days = {{wed, 10.0, 1.5, 1.0, 1.0, 1.0}};
        CHECK_THROWS_AS(extrapolate_annual(in, std::span(&none, 1)), ConfigError);
    }
}

TEST_CASE("reference annual table from its yearly mileages")
{
    const std::vector<StrategyTotals> totals{
        {"Return", 41409997, 130365143, 73478183},
        {"Wait", 43668439, 130365143, 0},
        {"Hotspot", 44423004, 130365143, 19546686},
    };
    const auto t = extrapolation_from_totals(totals, 102.35);
    using R = ExtrapolationRow;
    // Return, Wait, Hotspot reference rows, to within rounding of the printed figures
    const double expect[3][6] = {
        {245253323, 0, 671927, 0, 25101678, 0},
        {174033582, 71219741, 476804, 195123, 17812337, 7289340},
        {194334832, 50918491, 532424, 139503, 19890170, 5211508},
    };
    double R::*fields[6] = {&R::s_total, &R::delta_s, &R::s_daily, &R::delta_s_daily, &R::e_kg, &R::delta_e_kg};
    for (std::size_t row = 0; row < 3; ++row) {
        for (std::size_t f = 0; f < 6; ++f) {
            CHECK(std::abs(cell(t, row, fields[f]) - expect[row][f]) <= 2.0);
        }
    }
    std::ostringstream csv;
    write_extrapolation_csv(csv, t);
    CHECK(csv.str().find("245253323") != std::string::npos);
}
