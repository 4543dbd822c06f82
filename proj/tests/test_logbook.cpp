#include "doctest.h"

#include "oracles.hpp"

#include "ridesim/error.hpp"
#include "ridesim/grid_network.hpp"
#include "ridesim/input_analysis.hpp"
#include "ridesim/logbook.hpp"
#include "ridesim/random.hpp"
#include "ridesim/routing.hpp"

#include <set>
#include <sstream>

using namespace ridesim;

namespace {

const char* kHeader =
    "order_time,vehicle_id,accept_lat,accept_lon,pickup_time,pickup_lat,pickup_lon,dropoff_time,dropoff_lat,dropoff_lon\n";

Timestamp at(const char* text)
{
    return *parse_timestamp(text);
}

RideOrder ride(const std::string& vehicle, const char* order, const char* pickup, const char* dropoff,
               LatLon from = {52.50, 13.40}, LatLon to = {52.52, 13.42})
{
    RideOrder r;
    r.order_id = vehicle + order;
    r.vehicle_id = vehicle;
    r.order_time = at(order);
    r.pickup_time = at(pickup);
    r.dropoff_time = at(dropoff);
    r.accept_location = from;
    r.pickup_location = from;
    r.dropoff_location = to;
    return r;
}

} // namespace

TEST_CASE("timestamps")
{
    const Timestamp t = at("2024-01-03T08:15:30+01:00");
    CHECK(t.unix_s == 1704266130);
    CHECK(format_timestamp(t) == "2024-01-03T08:15:30+01:00");
    CHECK(local_weekday(t) == Weekday::Wednesday);
    CHECK(local_seconds_of_day(t) == 8 * 3600 + 15 * 60 + 30);
    CHECK(at("2024-01-03T07:15:30Z") == t);
    CHECK(at("2024-01-03T08:15:30.999+0100") == t);
    CHECK_FALSE(parse_timestamp("2024-01-03T08:15:30"));
    CHECK_FALSE(parse_timestamp("2024-13-03T08:15:30Z"));
    // 01:30 UTC on Thursday, still Wednesday evening locally
    CHECK(local_weekday(at("2024-01-03T23:30:00-02:00")) == Weekday::Wednesday);
    CHECK(local_weekday(at("2024-01-04T00:30:00+02:00")) == Weekday::Thursday);
}

TEST_CASE("parse_logbook")
{
    SUBCASE("valid rows are kept in file order")
    {
        std::istringstream in(std::string(kHeader) +
                              "2024-01-03T08:00:00+01:00,V1,52.50,13.40,2024-01-03T08:05:00+01:00,52.51,13.41,"
                              "2024-01-03T08:20:00+01:00,52.52,13.42\n"
                              "2024-01-03T09:00:00+01:00,V1,52.52,13.42,2024-01-03T09:00:00+01:00,52.52,13.42,"
                              "2024-01-03T09:00:00+01:00,52.53,13.43\n"
                              "2024-01-03T08:30:00+01:00,V2,52.50,13.40,2024-01-03T08:35:00+01:00,52.51,13.41,"
                              "2024-01-03T08:50:00+01:00,52.52,13.42\n");
        const auto r = parse_logbook(in);
        REQUIRE(r.orders.size() == 3);
        CHECK(r.rejected.empty());
        CHECK(r.orders[0].order_id == "L2");
        CHECK(r.orders[2].vehicle_id == "V2");
        CHECK(r.orders[1].dropoff_location.lat == 52.53);
    }
    SUBCASE("pickup before order is rejected by line")
    {
        std::istringstream in(std::string(kHeader) +
                              "2024-01-03T08:00:00+01:00,V1,52.50,13.40,2024-01-03T08:05:00+01:00,52.51,13.41,"
                              "2024-01-03T08:20:00+01:00,52.52,13.42\n"
                              "2024-01-03T08:10:00+01:00,V1,52.50,13.40,2024-01-03T08:05:00+01:00,52.51,13.41,"
                              "2024-01-03T08:20:00+01:00,52.52,13.42\n");
        const auto r = parse_logbook(in);
        CHECK(r.orders.size() == 1);
        REQUIRE(r.rejected.size() == 1);
        CHECK(r.rejected[0].line == 3);
    }
    SUBCASE("missing column")
    {
        std::istringstream in("order_time,vehicle_id\n2024-01-03T08:00:00Z,V1\n");
        CHECK_THROWS_WITH_AS(parse_logbook(in), doctest::Contains("accept_lat"), LogbookError);
    }
    SUBCASE("malformed timestamp")
    {
        std::istringstream in(std::string(kHeader) +
                              "yesterday,V1,52.50,13.40,2024-01-03T08:05:00+01:00,52.51,13.41,"
                              "2024-01-03T08:20:00+01:00,52.52,13.42\n");
        CHECK_THROWS_AS(parse_logbook(in), LogbookError);
    }
    SUBCASE("write and read back")
    {
        const std::vector<RideOrder> orders{
            ride("V7", "2024-01-03T08:00:00+01:00", "2024-01-03T08:04:00+01:00", "2024-01-03T08:30:00+01:00")};
        std::stringstream io;
        write_logbook(io, orders);
        const auto back = parse_logbook(io);
        REQUIRE(back.orders.size() == 1);
        CHECK(back.orders[0].order_id == orders[0].order_id);
        CHECK(back.orders[0].dropoff_time == orders[0].dropoff_time);
        CHECK(back.orders[0].dropoff_location.lon == doctest::Approx(13.42).epsilon(1e-9));
    }
}

TEST_CASE("extract_shifts splits on gaps longer than two hours")
{
    const std::vector<RideOrder> orders{
        ride("A", "2024-01-03T08:00:00Z", "2024-01-03T08:05:00Z", "2024-01-03T08:20:00Z"),
        // exactly 2 h after the previous dropoff: same shift
        ride("A", "2024-01-03T10:20:00Z", "2024-01-03T10:25:00Z", "2024-01-03T10:40:00Z"),
        // 2 h 00 min 01 s: new shift
        ride("A", "2024-01-03T12:40:01Z", "2024-01-03T12:45:00Z", "2024-01-03T13:00:00Z"),
        ride("B", "2024-01-03T09:00:00Z", "2024-01-03T09:05:00Z", "2024-01-03T09:20:00Z"),
    };
    const auto shifts = extract_shifts(orders);
    REQUIRE(shifts.size() == 3);
    CHECK(shifts[0].vehicle_id == "A");
    CHECK(shifts[0].rides.size() == 2);
    CHECK(shifts[1].rides.size() == 1);
    CHECK(shifts[2].vehicle_id == "B");
    CHECK(shifts[0].id == "A#1");
    CHECK(shifts[1].id == "A#2");
}

TEST_CASE("extract_shifts partitions the rides")
{
    Rng rng(stream_seed(3, "shift-partition"));
    for (int trial = 0; trial < 50; ++trial) {
        std::vector<RideOrder> orders;
        const auto n = 1 + uniform_index(rng, 80);
        for (std::uint64_t i = 0; i < n; ++i) {
            RideOrder r;
            r.order_id = "o" + std::to_string(i);
            r.vehicle_id = "V" + std::to_string(uniform_index(rng, 4));
            r.order_time.unix_s = 1704268800 + static_cast<std::int64_t>(uniform_index(rng, 86400));
            r.pickup_time = r.order_time.plus_seconds(static_cast<std::int64_t>(uniform_index(rng, 900)));
            r.dropoff_time = r.pickup_time.plus_seconds(static_cast<std::int64_t>(uniform_index(rng, 3600)));
            orders.push_back(r);
        }
        const auto shifts = extract_shifts(orders);
        std::multiset<std::string> seen;
        for (const auto& s : shifts) {
            REQUIRE_FALSE(s.rides.empty());
            for (std::size_t i = 0; i < s.rides.size(); ++i) {
                seen.insert(s.rides[i].order_id);
                CHECK(s.rides[i].vehicle_id == s.vehicle_id);
                if (i > 0) {
                    CHECK(s.rides[i - 1].order_time <= s.rides[i].order_time);
                    CHECK(s.rides[i].order_time.unix_s - s.rides[i - 1].dropoff_time.unix_s <= 7200);
                }
            }
        }
        std::multiset<std::string> all;
        for (const auto& o : orders) {
            all.insert(o.order_id);
        }
        CHECK(seen == all);
        // consecutive shifts of one vehicle are separated by a real gap
        for (std::size_t k = 1; k < shifts.size(); ++k) {
            if (shifts[k].vehicle_id == shifts[k - 1].vehicle_id) {
                const auto& prev = shifts[k - 1].rides.back();
                CHECK(shifts[k].rides.front().order_time.unix_s - prev.dropoff_time.unix_s > 7200);
            }
        }
    }
}

TEST_CASE("polygon containment")
{
    const Polygon square({{52.4, 13.3}, {52.4, 13.5}, {52.6, 13.5}, {52.6, 13.3}});
    CHECK(square.contains({52.5, 13.4}));
    CHECK_FALSE(square.contains({52.7, 13.4}));
    CHECK_THROWS_AS(Polygon({{52.4, 13.3}, {52.4, 13.5}}), DataError);

    // concave ring against the winding-number oracle
    const std::vector<LatLon> ring{{52.40, 13.30}, {52.40, 13.50}, {52.60, 13.50}, {52.60, 13.42},
                                   {52.45, 13.40}, {52.60, 13.38}, {52.60, 13.30}};
    const Polygon u(ring);
    Rng rng(99);
    for (int i = 0; i < 5000; ++i) {
        const LatLon p{uniform(rng, 52.35, 52.65), uniform(rng, 13.25, 13.55)};
        CHECK(u.contains(p) == oracle::winding_contains(ring, p));
    }
}

TEST_CASE("parse_polygon accepts Feature and FeatureCollection")
{
    const std::string poly = R"({"type": "Polygon", "coordinates": [[[13.3, 52.4], [13.5, 52.4], [13.5, 52.6], [13.3, 52.6], [13.3, 52.4]]]})";
    CHECK(parse_polygon(poly).contains({52.5, 13.4}));
    CHECK(parse_polygon(R"({"type": "Feature", "geometry": )" + poly + "}").contains({52.5, 13.4}));
    CHECK(parse_polygon(R"({"type": "FeatureCollection", "features": [{"type": "Feature", "geometry": )" + poly + "}]}")
              .contains({52.5, 13.4}));
}

TEST_CASE("filter_out_of_area dismisses whole shifts")
{
    const Polygon area({{52.4, 13.3}, {52.4, 13.5}, {52.6, 13.5}, {52.6, 13.3}});
    std::vector<RideOrder> orders{
        ride("A", "2024-01-03T08:00:00Z", "2024-01-03T08:05:00Z", "2024-01-03T08:20:00Z"),
        ride("A", "2024-01-03T08:30:00Z", "2024-01-03T08:35:00Z", "2024-01-03T08:50:00Z"),
        ride("B", "2024-01-03T08:00:00Z", "2024-01-03T08:05:00Z", "2024-01-03T08:20:00Z"),
    };
    orders[1].dropoff_location = {52.7, 13.4}; // outside
    const auto shifts = extract_shifts(orders);
    const auto r = filter_out_of_area(shifts, area);
    REQUIRE(r.kept.size() == 1);
    CHECK(r.kept[0].vehicle_id == "B");
    REQUIRE(r.dismissed.size() == 1);
    CHECK(r.dismissed[0].rides.size() == 2);
}

TEST_CASE("classify_follow_up")
{
    Shift s;
    s.id = "A#1";
    s.rides = {
        ride("A", "2024-01-03T08:00:00Z", "2024-01-03T08:05:00Z", "2024-01-03T08:20:00Z"),
        ride("A", "2024-01-03T08:15:00Z", "2024-01-03T08:25:00Z", "2024-01-03T08:40:00Z"), // during ride 0
        ride("A", "2024-01-03T08:45:00Z", "2024-01-03T08:50:00Z", "2024-01-03T09:00:00Z"), // during return
        ride("A", "2024-01-03T09:30:00Z", "2024-01-03T09:35:00Z", "2024-01-03T09:50:00Z"), // at PoB
    };
    std::vector<std::optional<Timestamp>> back{std::nullopt, at("2024-01-03T08:55:00Z"), at("2024-01-03T09:10:00Z"),
                                               std::nullopt};
    const auto f = classify_follow_up(s, back);
    REQUIRE(f.size() == 4);
    CHECK(f[0] == FollowUp::DuringRide);
    CHECK(f[1] == FollowUp::DuringReturn);
    CHECK(f[2] == FollowUp::AtPoB);
    CHECK(f[3] == FollowUp::None);

    back[1] = std::nullopt;
    CHECK_THROWS_AS(classify_follow_up(s, back), DataError);
}

TEST_CASE("static mileage report")
{
    const RoadGraph g = make_grid_network(GridSpec{});
    const LatLon pob = g.node(0).pos;
    const NodeIndex a = 45;
    const NodeIndex b = 210;
    const NodeIndex c = 333;

    SUBCASE("a single ride yields pickup, ride and return legs")
    {
        Shift s;
        s.id = "A#1";
        s.rides = {ride("A", "2024-01-03T08:00:00Z", "2024-01-03T08:05:00Z", "2024-01-03T08:20:00Z", g.node(a).pos,
                        g.node(c).pos)};
        s.rides[0].pickup_location = g.node(b).pos;
        const auto rep = static_mileage_report(std::span<const Shift>(&s, 1), g, pob);
        CHECK(rep.rides == 1);
        CHECK(rep.unroutable.empty());
        CHECK(rep.overall.pickup_m == doctest::Approx(fastest_path(g, a, b, 0.0)->total_length_m));
        CHECK(rep.overall.ride_m == doctest::Approx(fastest_path(g, b, c, 0.0)->total_length_m));
        CHECK(rep.overall.return_m == doctest::Approx(fastest_path(g, c, 0, 0.0)->total_length_m));
        const auto sh = rep.overall.shares();
        CHECK(sh[0] + sh[1] + sh[2] == doctest::Approx(1.0));
    }
    SUBCASE("follow-ups accepted during the ride leave nothing to return but the last leg")
    {
        Shift s;
        s.id = "A#1";
        s.rides = {ride("A", "2024-01-03T08:00:00Z", "2024-01-03T08:05:00Z", "2024-01-03T08:20:00Z", g.node(a).pos,
                        g.node(c).pos),
                   ride("A", "2024-01-03T08:10:00Z", "2024-01-03T08:25:00Z", "2024-01-03T08:40:00Z", g.node(b).pos,
                        g.node(0).pos)};
        const auto rep = static_mileage_report(std::span<const Shift>(&s, 1), g, pob);
        CHECK(rep.rides == 2);
        // the second pickup leg starts at the first dropoff
        const double expect_pickup =
            fastest_path(g, a, a, 0.0)->total_length_m + fastest_path(g, c, b, 0.0)->total_length_m;
        CHECK(rep.overall.pickup_m == doctest::Approx(expect_pickup));
        // last dropoff is the PoB itself
        CHECK(rep.overall.return_m == 0.0);
    }
}
