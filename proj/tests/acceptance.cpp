// Acceptance checks. Prints one PASS/FAIL line per criterion and exits
// non-zero if any fails.

#include "oracles.hpp"

#include "ridesim/batch.hpp"
#include "ridesim/csv.hpp"
#include "ridesim/hotspots.hpp"
#include "ridesim/logbook_generator.hpp"
#include "ridesim/random.hpp"
#include "ridesim/routing.hpp"
#include "ridesim/sim_io.hpp"
#include "ridesim/validation.hpp"

#include "CLI11.hpp"
#include "json.hpp"

#include <sys/wait.h>

#include <algorithm>
#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <set>
#include <sstream>

using namespace ridesim;
namespace fs = std::filesystem;
using json = nlohmann::json;
using Clock = std::chrono::steady_clock;

namespace {

struct Context {
    fs::path data;
    std::string cli;
    fs::path work;
};

int failures = 0;

void report(int id, const char* name, bool ok, const std::string& detail)
{
    std::cout << (ok ? "PASS " : "FAIL ") << id << ' ' << name << ": " << detail << std::endl;
    failures += ok ? 0 : 1;
}

double seconds_since(Clock::time_point t0)
{
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string quote(const std::string& s)
{
    return "'" + s + "'";
}

// Runs the CLI with output appended to work/cli.log; returns the exit code.
int run_cli(const Context& c, const std::string& args)
{
    const std::string cmd = quote(c.cli) + " " + args + " >> " + quote((c.work / "cli.log").string()) + " 2>&1";
    const int rc = std::system(cmd.c_str());
    return WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
}

std::string slurp(const fs::path& p)
{
    std::ifstream in(p, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

std::string fmt(double v, int digits = 2)
{
    return format_fixed(v, digits);
}

// ---- 1 -------------------------------------------------------------------

void extrapolation(const Context& c)
{
    const fs::path out = c.work / "extrapolation.csv";
    const auto t0 = Clock::now();
    const int rc = run_cli(c, "extrapolate --config " + quote((c.data / "annual_totals.json").string()) + " --out " +
                                  quote(out.string()));
    const double secs = seconds_since(t0);
    if (rc != 0) {
        report(1, "extrapolation", false, "extrapolate exited with " + std::to_string(rc));
        return;
    }
    // reference values: Return, Wait, Hotspot
    const std::map<std::string, std::array<double, 3>> expect{
        {"S", {245253323, 174033582, 194334832}}, {"dS", {0, 71219741, 50918491}},
        {"S_mean", {671927, 476804, 532424}},     {"dS_mean", {0, 195123, 139503}},
        {"E_CO2", {25101678, 17812337, 19890170}}, {"dE_CO2", {0, 7289340, 5211508}},
    };
    std::istringstream in(slurp(out));
    const CsvDocument doc = read_csv(in);
    std::size_t checked = 0;
    double worst = 0.0;
    for (const auto& row : doc.rows) {
        const auto it = expect.find(row.fields.at(0));
        if (it == expect.end()) {
            continue;
        }
        for (std::size_t k = 0; k < 3; ++k) {
            const double v = parse_double(row.fields.at(2 + k)).value_or(1e300);
            worst = std::max(worst, std::abs(v - it->second[k]));
            ++checked;
        }
    }
    const bool ok = checked == 18 && worst <= 2.0 && secs < 1.0;
    report(1, "extrapolation", ok,
           std::to_string(checked) + "/18 cells, max |diff| " + fmt(worst, 0) + ", " + fmt(secs, 3) + " s");
}

// ---- 8, then 2/3/4 on the same batch -------------------------------------

struct RunFigures {
    std::string day;
    Strategy strategy;
    std::uint64_t seed;
    std::int64_t trip_mm[3]{}; // pickup, ride, rebalancing summed over trips.csv
    std::int64_t shift_mm[3]{};
    std::int64_t shift_total_mm = 0;
    std::string manifest_mm[4]; // pickup, ride, rebalancing, total as written
    double co2_g = 0.0;
    double km = 0.0;
};

std::vector<RunFigures> collect_runs(const fs::path& batch_dir, const ExperimentPlan& plan,
                                     const EmissionFactorTable& table)
{
    std::vector<RunFigures> runs;
    for (const auto& r : plan.runs) {
        const fs::path dir = batch_dir / run_dir_name(r);
        RunFigures f{r.day, r.strategy, r.seed};
        const SimOutput out = read_sim_output(dir.string());
        for (const auto& t : out.trips) {
            f.trip_mm[static_cast<int>(t.reason)] += t.distance_mm;
        }
        for (const auto& s : out.shifts) {
            f.shift_mm[0] += s.pickup_mm;
            f.shift_mm[1] += s.ride_mm;
            f.shift_mm[2] += s.rebalancing_mm;
            f.shift_total_mm += s.total_mm();
        }
        const json m = json::parse(slurp(dir / "manifest.json"));
        const auto& mm = m.at("mileage_m");
        f.manifest_mm[0] = mm.at("pickup").get<std::string>();
        f.manifest_mm[1] = mm.at("ride").get<std::string>();
        f.manifest_mm[2] = mm.at("rebalancing").get<std::string>();
        f.manifest_mm[3] = mm.at("total").get<std::string>();
        const EmissionTotals e = aggregate_emissions(out.trips, table);
        f.co2_g = e.totals[Pollutant::CO2];
        f.km = e.distance_km;
        runs.push_back(f);
    }
    return runs;
}

void batch_determinism(const Context& c, const ExperimentPlan& plan)
{
    const std::string cfg = quote((c.data / "plan.json").string());
    fs::remove_all(c.work / "batch_p1");
    fs::remove_all(c.work / "batch_p4");
    const auto t0 = Clock::now();
    const int rc1 = run_cli(c, "batch --config " + cfg + " --parallel 1 --out " + quote((c.work / "batch_p1").string()));
    const double s1 = seconds_since(t0);
    const auto t1 = Clock::now();
    const int rc4 = run_cli(c, "batch --config " + cfg + " --parallel 4 --out " + quote((c.work / "batch_p4").string()));
    const double s4 = seconds_since(t1);
    const std::string a = slurp(c.work / "batch_p1" / "kpi.csv");
    const std::string b = slurp(c.work / "batch_p4" / "kpi.csv");
    const bool ok = rc1 == 0 && rc4 == 0 && !a.empty() && a == b;
    report(8, "parallel determinism", ok,
           std::to_string(plan.runs.size()) + " runs, exit " + std::to_string(rc1) + "/" + std::to_string(rc4) +
               ", kpi.csv " + (a == b ? "identical" : "differs") + " (" + std::to_string(a.size()) + " bytes), " +
               fmt(s1, 1) + " s serial, " + fmt(s4, 1) + " s at 4");
}

void emission_band(const std::vector<RunFigures>& runs)
{
    double g = 0.0;
    double km = 0.0;
    double lo = 1e9;
    double hi = 0.0;
    for (const auto& r : runs) {
        if (r.day != "wednesday" || r.km <= 0.0) {
            continue;
        }
        g += r.co2_g;
        km += r.km;
        lo = std::min(lo, r.co2_g / r.km);
        hi = std::max(hi, r.co2_g / r.km);
    }
    const double rate = km > 0.0 ? g / km : 0.0;
    const bool ok = km > 0.0 && lo >= 95.0 && hi <= 110.0;
    report(2, "CO2 rate band", ok,
           "wednesday fleet average " + fmt(rate) + " g/km, runs " + fmt(lo) + "-" + fmt(hi) + " g/km");
}

void strategy_ordering(const std::vector<RunFigures>& runs)
{
    std::map<std::pair<std::string, std::uint64_t>, std::map<Strategy, const RunFigures*>> triples;
    for (const auto& r : runs) {
        triples[{r.day, r.seed}][r.strategy] = &r;
    }
    bool ok = true;
    std::size_t complete = 0;
    std::map<std::string, std::pair<std::int64_t, std::int64_t>> reb; // day -> (return, hotspot)
    std::int64_t ret_all = 0;
    std::int64_t hot_all = 0;
    for (const auto& [key, t] : triples) {
        if (t.size() != 3) {
            ok = false;
            continue;
        }
        ++complete;
        const RunFigures& ret = *t.at(Strategy::Return);
        const RunFigures& wait = *t.at(Strategy::Wait);
        const RunFigures& hot = *t.at(Strategy::Hotspot);
        ok = ok && wait.trip_mm[2] == 0;
        // ride mileage to the meter
        ok = ok && ret.trip_mm[1] / 1000 == wait.trip_mm[1] / 1000 && ret.trip_mm[1] / 1000 == hot.trip_mm[1] / 1000;
        reb[key.first].first += ret.trip_mm[2];
        reb[key.first].second += hot.trip_mm[2];
        ret_all += ret.trip_mm[2];
        hot_all += hot.trip_mm[2];
    }
    const double reduction = ret_all > 0 ? 1.0 - static_cast<double>(hot_all) / static_cast<double>(ret_all) : 0.0;
    ok = ok && complete > 0 && hot_all < ret_all && reduction >= 0.5 && reduction <= 0.9;
    std::string detail = std::to_string(complete) + " triples, hotspot rebalancing " + fmt(-100.0 * reduction, 1) + "%";
    for (const auto& [day, p] : reb) {
        detail += ", " + day + " " +
                  fmt(-100.0 * (1.0 - static_cast<double>(p.second) / static_cast<double>(std::max<std::int64_t>(p.first, 1))), 1) +
                  "%";
    }
    report(3, "strategy ordering", ok, detail);
}

void mileage_identity(const std::vector<RunFigures>& runs)
{
    std::size_t good = 0;
    for (const auto& r : runs) {
        const std::int64_t total = r.trip_mm[0] + r.trip_mm[1] + r.trip_mm[2];
        bool ok = r.shift_total_mm == total;
        for (int k = 0; k < 3; ++k) {
            ok = ok && r.shift_mm[k] == r.trip_mm[k] && r.manifest_mm[k] == format_mm_as_m(r.trip_mm[k]);
        }
        ok = ok && r.manifest_mm[3] == format_mm_as_m(total);
        good += ok ? 1 : 0;
    }
    report(4, "mileage identity", !runs.empty() && good == runs.size(),
           std::to_string(good) + "/" + std::to_string(runs.size()) + " runs exact");
}

// ---- 5 -------------------------------------------------------------------

RoadGraph random_graph(Rng& rng)
{
    const auto n = static_cast<int>(3 + uniform_index(rng, 10)); // 3..12 nodes
    std::vector<NodeSpec> nodes;
    for (int i = 0; i < n; ++i) {
        nodes.push_back({i + 1, {uniform(rng, 52.4, 52.6), uniform(rng, 13.3, 13.5)}});
    }
    std::set<std::pair<int, int>> used;
    std::vector<EdgeSpec> edges;
    const auto m = static_cast<int>(n + uniform_index(rng, static_cast<std::uint64_t>(2 * n)));
    for (int k = 0; k < m; ++k) {
        const int a = static_cast<int>(1 + uniform_index(rng, n));
        const int b = static_cast<int>(1 + uniform_index(rng, n));
        if (a != b && used.emplace(a, b).second) {
            // whole seconds keep every cost exact
            edges.push_back({static_cast<std::int64_t>(edges.size() + 1), a, b,
                             static_cast<double>(10 * (1 + uniform_index(rng, 120))), 10.0});
        }
    }
    std::vector<TurnPenaltySpec> turns;
    for (const auto& in : edges) {
        for (const auto& out : edges) {
            if (in.to == out.from && bernoulli(rng, 0.5)) {
                turns.push_back({in.id, out.id, static_cast<double>(uniform_index(rng, 41))});
            }
        }
    }
    return RoadGraph(std::move(nodes), std::move(edges), std::move(turns));
}

void routing_oracle()
{
    const auto t0 = Clock::now();
    Rng rng(stream_seed(2024, "acceptance-routing"));
    int match = 0;
    int reachable = 0;
    for (int k = 0; k < 100; ++k) {
        const RoadGraph g = random_graph(rng);
        const NodeIndex o = static_cast<NodeIndex>(uniform_index(rng, g.node_count()));
        NodeIndex d = static_cast<NodeIndex>(uniform_index(rng, g.node_count()));
        if (d == o) {
            d = (d + 1) % static_cast<NodeIndex>(g.node_count());
        }
        const auto expect = oracle::min_trail_cost(g, o, d);
        const auto got = fastest_path(g, o, d, 0.0);
        if (expect.has_value() != got.has_value()) {
            continue;
        }
        if (!got) {
            ++match;
            continue;
        }
        ++reachable;
        double walked = 0.0;
        for (std::size_t i = 0; i < got->edges.size(); ++i) {
            walked += (i ? g.turn_penalty(got->edges[i - 1], got->edges[i]) : 0.0) +
                      oracle::edge_time(g, got->edges[i], 1.0);
        }
        match += got->total_time_s == *expect && walked == *expect ? 1 : 0;
    }
    const double secs = seconds_since(t0);
    report(5, "routing oracle", match == 100 && secs < 60.0,
           std::to_string(match) + "/100 exact (" + std::to_string(reachable) + " reachable), " + fmt(secs, 2) + " s");
}

// ---- 6 -------------------------------------------------------------------

void dbscan_oracle()
{
    Rng rng(stream_seed(2024, "acceptance-dbscan"));
    int match = 0;
    for (int k = 0; k < 50; ++k) {
        const auto n = 20 + uniform_index(rng, 181);
        std::vector<LatLon> pts;
        const auto blobs = 1 + uniform_index(rng, 5);
        std::vector<LatLon> centres;
        for (std::uint64_t b = 0; b < blobs; ++b) {
            centres.push_back({uniform(rng, 52.45, 52.55), uniform(rng, 13.3, 13.5)});
        }
        for (std::uint64_t i = 0; i < n; ++i) {
            if (bernoulli(rng, 0.2)) {
                pts.push_back({uniform(rng, 52.45, 52.55), uniform(rng, 13.3, 13.5)});
            } else {
                const LatLon c = centres[uniform_index(rng, centres.size())];
                pts.push_back(offset_m(c, standard_normal(rng) * 250.0, standard_normal(rng) * 250.0));
            }
        }
        const double eps = uniform(rng, 80.0, 400.0);
        const std::size_t min_pts = 2 + uniform_index(rng, 9);
        const auto labels = dbscan(pts, eps, min_pts);
        const auto ref = oracle::brute_dbscan(pts, eps, min_pts);
        bool ok = dbscan_core_points(pts, eps, min_pts) == ref.core &&
                  oracle::same_partition(labels, ref.core_component, ref.core);
        for (std::size_t i = 0; ok && i < pts.size(); ++i) {
            if (ref.core[i]) {
                continue;
            }
            // a border point joins a cluster of a core neighbour; isolated points are noise
            bool near_core = false;
            for (std::size_t j : ref.neighbours[i]) {
                near_core = near_core || (ref.core[j] && labels[j] == labels[i]);
            }
            ok = labels[i] == kNoise ? std::none_of(ref.neighbours[i].begin(), ref.neighbours[i].end(),
                                                    [&](std::size_t j) { return static_cast<bool>(ref.core[j]); })
                                     : near_core;
        }
        match += ok ? 1 : 0;
    }
    report(6, "DBSCAN oracle", match == 50, std::to_string(match) + "/50 partitions match");
}

// ---- 7 -------------------------------------------------------------------

void logbook_invariants(const ScenarioInputs& in)
{
    const auto serialize = [](const SyntheticLogbook& b) {
        std::ostringstream s;
        write_logbook(s, b.orders());
        return s.str();
    };
    int good = 0;
    int identical = 0;
    for (std::uint64_t seed = 1; seed <= 100; ++seed) {
        const Weekday day = static_cast<Weekday>(seed % 7);
        const SyntheticLogbook book = generate_logbook(in.source_shifts, day, 50, seed);
        bool ok = book.vehicles.size() <= 50;
        for (const auto& v : book.vehicles) {
            ok = ok && v.shifts.size() <= kMaxShiftsPerVehicle;
            for (std::size_t i = 0; i < v.shifts.size(); ++i) {
                if (i > 0) {
                    ok = ok && v.shifts[i].start().unix_s - v.shifts[i - 1].end().unix_s >= 7200;
                }
                const auto& rides = v.shifts[i].rides;
                for (std::size_t k = 1; k < rides.size(); ++k) {
                    ok = ok && rides[k].order_time.unix_s - rides[k - 1].dropoff_time.unix_s <= 7200;
                }
            }
        }
        good += ok ? 1 : 0;
        identical += serialize(book) == serialize(generate_logbook(in.source_shifts, day, 50, seed)) ? 1 : 0;
    }
    report(7, "logbook generation", good == 100 && identical == 100,
           std::to_string(good) + "/100 seeds satisfy the invariants, " + std::to_string(identical) +
               "/100 byte-identical on repeat");
}

// ---- 9 -------------------------------------------------------------------

void validation_machinery()
{
    struct Case {
        std::vector<double> diffs;
        double median;
        double share;
    };
    // hand-computed: sort, take the middle (mean of two when even), count |d| < 200
    const std::vector<Case> cases{
        {{-300, -50, 0, 150, 400}, 0.0, 0.6},
        {{100, 100, 100}, 100.0, 1.0},
        {{-250, -120, -69, 10, 180, 199, 200, 350}, 95.0, 0.625},
        {{-200, 200}, 0.0, 0.0},
        {{-69}, -69.0, 1.0},
    };
    int good = 0;
    for (const auto& c : cases) {
        const ValidationReport r = report_from_diffs(c.diffs, c.diffs, 200.0);
        good += r.travel_time_median_s == c.median && r.travel_time_share_below == c.share &&
                r.pickup_median_s == c.median && r.pickup_share_below == c.share;
    }
    // the same numbers through the order join
    SimOutput out;
    std::vector<RideOrder> ref;
    const std::vector<double> d{-300, -50, 0, 150, 400};
    for (std::size_t i = 0; i < d.size(); ++i) {
        const std::int64_t base = 1704272400 + static_cast<std::int64_t>(i) * 3600;
        RideOrder r;
        r.order_id = "o" + std::to_string(i);
        r.order_time = {base - 300, 3600};
        r.pickup_time = {base, 3600};
        r.dropoff_time = {base + 1000, 3600};
        ref.push_back(r);
        OrderOutcome o;
        o.order_id = r.order_id;
        o.pickup_ms = base * 1000;
        o.dropoff_ms = (base + 1000) * 1000 + static_cast<SimTime>(d[i] * 1000.0);
        out.orders.push_back(o);
    }
    const ValidationReport joined = validation_metrics(out, ref, 200.0);
    const bool join_ok = joined.travel_time_median_s == 0.0 && joined.travel_time_share_below == 0.6 &&
                         joined.pickup_median_s == 0.0 && joined.pickup_share_below == 1.0;
    report(9, "validation metrics", good == static_cast<int>(cases.size()) && join_ok,
           std::to_string(good) + "/" + std::to_string(cases.size()) + " crafted fixtures exact, join " +
               (join_ok ? "exact" : "wrong"));
}

// ---- 10 ------------------------------------------------------------------

void desk_performance(const Context& c)
{
    const fs::path dir = c.work / "day50";
    fs::remove_all(dir);
    const auto t0 = Clock::now();
    const int rc = run_cli(c, "simulate --config " + quote((c.data / "scenario.json").string()) +
                                  " --fleet-size 50 --out " + quote(dir.string()));
    const double secs = seconds_since(t0);
    std::size_t vehicles = 0;
    std::size_t orders = 0;
    if (rc == 0) {
        const json m = json::parse(slurp(dir / "manifest.json"));
        vehicles = m.at("vehicles").get<std::size_t>();
        orders = m.at("orders").get<std::size_t>();
    }
    report(10, "desk-scale performance", rc == 0 && vehicles == 50 && secs < 60.0,
           std::to_string(vehicles) + " vehicles, " + std::to_string(orders) + " orders in " + fmt(secs, 2) + " s");
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"acceptance checks"};
    std::string data;
    std::string cli;
    std::string work;
    app.add_option("--data", data, "fixture directory")->required();
    app.add_option("--cli", cli, "ridesim executable")->required();
    app.add_option("--work", work, "scratch directory")->required();
    CLI11_PARSE(app, argc, argv);

    const Context c{fs::absolute(data), fs::absolute(cli).string(), fs::absolute(work)};
    fs::create_directories(c.work);
    fs::remove(c.work / "cli.log");

    const auto guarded = [](int id, const char* name, const auto& fn) {
        try {
            fn();
        } catch (const std::exception& e) {
            report(id, name, false, std::string("threw: ") + e.what());
        }
    };

    guarded(1, "extrapolation", [&] { extrapolation(c); });

    std::vector<RunFigures> runs;
    std::optional<ExperimentPlan> plan;
    guarded(8, "parallel determinism", [&] {
        plan = load_plan((c.data / "plan.json").string());
        batch_determinism(c, *plan);
    });
    try {
        if (plan) {
            const ScenarioInputs in = load_scenario_inputs(plan->scenario, false);
            runs = collect_runs(c.work / "batch_p1", *plan, in.emission_table);
        }
    } catch (const std::exception& e) {
        std::cout << "batch outputs unreadable: " << e.what() << '\n';
    }
    guarded(2, "CO2 rate band", [&] { emission_band(runs); });
    guarded(3, "strategy ordering", [&] { strategy_ordering(runs); });
    guarded(4, "mileage identity", [&] { mileage_identity(runs); });

    guarded(5, "routing oracle", [&] { routing_oracle(); });
    guarded(6, "DBSCAN oracle", [&] { dbscan_oracle(); });
    guarded(7, "logbook generation", [&] {
        const ScenarioFile s = load_scenario_file((c.data / "scenario.json").string());
        logbook_invariants(load_scenario_inputs(s, false));
    });
    guarded(9, "validation metrics", [&] { validation_machinery(); });
    guarded(10, "desk-scale performance", [&] { desk_performance(c); });

    std::cout << (failures == 0 ? "all criteria passed" : std::to_string(failures) + " criteria failed") << '\n';
    return failures == 0 ? 0 : 1;
}
