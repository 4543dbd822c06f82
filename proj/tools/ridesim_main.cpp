// ridesim command-line entry point.
//
// Exit codes: 0 ok, 1 usage, 2 data or validation error, 3 batch finished
// with failed runs.

#include "ridesim/batch.hpp"
#include "ridesim/csv.hpp"
#include "ridesim/demand.hpp"
#include "ridesim/error.hpp"
#include "ridesim/extrapolation.hpp"
#include "ridesim/hotspots.hpp"
#include "ridesim/input_analysis.hpp"
#include "ridesim/kpi.hpp"
#include "ridesim/logbook.hpp"
#include "ridesim/logbook_generator.hpp"
#include "ridesim/scenario_config.hpp"
#include "ridesim/sim_io.hpp"
#include "ridesim/validation.hpp"

#include "CLI11.hpp"
#include "json.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

namespace fs = std::filesystem;
using nlohmann::json;
using namespace ridesim;

namespace {

constexpr int kExitUsage = 1;
constexpr int kExitData = 2;
constexpr int kExitPartial = 3;

std::string read_text(const std::string& path)
{
    std::ifstream in(path);
    if (!in) {
        throw DataError("cannot open " + path);
    }
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_manifest(const fs::path& path, const json& j)
{
    if (path.has_parent_path()) {
        fs::create_directories(path.parent_path());
    }
    std::ofstream out(path);
    out << j.dump(2) << '\n';
}

// `out.csv` -> `out.manifest.json`; a directory gets `manifest.json` inside.
fs::path manifest_for_file(const std::string& out)
{
    fs::path p(out);
    p.replace_extension(".manifest.json");
    return p;
}

std::optional<Strategy> strategy_arg(const std::string& text)
{
    if (text.empty()) {
        return std::nullopt;
    }
    const auto s = parse_strategy(text);
    if (!s) {
        throw CLI::ValidationError("--strategy", "expected return, wait or hotspot");
    }
    return s;
}

Weekday day_arg(const std::string& text)
{
    const auto d = parse_weekday(text);
    if (!d) {
        throw ConfigError("unknown day '" + text + "'");
    }
    return *d;
}

struct ScenarioOverrides {
    std::string strategy;
    std::optional<std::uint64_t> seed;
    std::string day;
    std::optional<std::size_t> fleet_size;
    std::optional<double> dwell;
    std::optional<double> latency;
    std::optional<double> wait_probability;
    std::optional<double> budget;
    std::string profile;
    std::string hotspots;
    std::string emission_table;
    std::string emission_mode;

    void add_to(CLI::App* cmd)
    {
        cmd->add_option("--strategy", strategy, "return | wait | hotspot");
        cmd->add_option("--seed", seed, "variation seed");
        cmd->add_option("--day", day, "weekday to simulate");
        cmd->add_option("--fleet-size", fleet_size);
        cmd->add_option("--dwell", dwell, "minimum stop dwell, s");
        cmd->add_option("--latency", latency, "message latency, s");
        cmd->add_option("--wait-probability", wait_probability, "hotspot strategy: chance to stay put");
        cmd->add_option("--budget", budget, "wall-clock budget per run, s");
        cmd->add_option("--profile", profile, "speed profile JSON");
        cmd->add_option("--hotspots", hotspots, "hotspot CSV");
        cmd->add_option("--emission-table", emission_table, "emission factor CSV");
        cmd->add_option("--emission-mode", emission_mode, "trip | edge");
    }

    void apply(ScenarioFile& s) const
    {
        if (const auto st = strategy_arg(strategy)) {
            s.strategy = *st;
        }
        if (seed) {
            s.seed = *seed;
        }
        if (!day.empty()) {
            day_arg(day);
            s.day = day;
        }
        if (fleet_size) {
            s.fleet_size = *fleet_size;
        }
        if (dwell) {
            s.min_dwell_s = *dwell;
        }
        if (latency) {
            s.message_latency_s = *latency;
        }
        if (wait_probability) {
            s.hotspot_wait_probability = *wait_probability;
        }
        if (budget) {
            s.wall_clock_budget_s = *budget;
        }
        if (!profile.empty()) {
            s.speed_profile_path = profile;
        }
        if (!hotspots.empty()) {
            s.hotspots_path = hotspots;
        }
        if (!emission_table.empty()) {
            s.emission_table_path = emission_table;
        }
        if (emission_mode == "edge") {
            s.emission_mode = EmissionMode::PerEdge;
        } else if (emission_mode == "trip") {
            s.emission_mode = EmissionMode::TripMeanSpeed;
        } else if (!emission_mode.empty()) {
            throw CLI::ValidationError("--emission-mode", "expected trip or edge");
        }
    }
};

void print_kpis(std::ostream& out, const RunKpis& k)
{
    const EmissionTotals totals{k.emissions, static_cast<double>(k.total_mm()) / 1e6, k.clamped_trips};
    out << "orders served   " << k.served << " / " << k.orders << '\n'
        << "pickup km       " << format_fixed(k.pickup_mm / 1e6, 3) << '\n'
        << "ride km         " << format_fixed(k.ride_mm / 1e6, 3) << '\n'
        << "rebalancing km  " << format_fixed(k.rebalancing_mm / 1e6, 3) << '\n'
        << "total km        " << format_fixed(k.total_mm() / 1e6, 3) << '\n'
        << "CO2 kg          " << format_fixed(k.emissions[Pollutant::CO2] / 1000.0, 3) << '\n'
        << "CO2 g/km        " << format_fixed(totals.mean_g_per_km(Pollutant::CO2), 2) << '\n';
}

// ---- gen-demand -----------------------------------------------------------

struct GenDemandArgs {
    std::string config;
    std::uint64_t seed = 2023;
    std::string network;
    std::optional<int> days;
    std::string out = "source_logbook.csv";
};

int cmd_gen_demand(const GenDemandArgs& a)
{
    DemandParams p = a.config.empty() ? DemandParams{} : load_demand_params(a.config);
    if (a.days) {
        p.days = *a.days;
    }
    p.validate();
    std::unique_ptr<TravelModel> model;
    if (a.network.empty()) {
        model = std::make_unique<CrowFlyTravelModel>();
    } else {
        auto g = std::make_shared<const RoadGraph>(load_network(a.network).with_turn_model(TurnCostModel{}));
        model = std::make_unique<NetworkTravelModel>(g);
    }
    const auto orders = synthesize_demand(p, a.seed, *model);
    write_logbook(a.out, orders);
    write_manifest(manifest_for_file(a.out), {{"command", "gen-demand"},
                                               {"seed", a.seed},
                                               {"network", a.network},
                                               {"params", json::parse(demand_params_to_json(p))},
                                               {"orders", orders.size()}});
    std::cout << orders.size() << " orders -> " << a.out << '\n';
    return 0;
}

// ---- gen-logbook ----------------------------------------------------------

struct GenLogbookArgs {
    std::string config;
    ScenarioOverrides over;
    std::string out = "logbook.csv";
};

int cmd_gen_logbook(GenLogbookArgs a)
{
    ScenarioFile s = load_scenario_file(a.config);
    a.over.apply(s);
    s.logbook_path.clear();
    const ScenarioInputs in = load_scenario_inputs(s, false);
    const SyntheticLogbook book = generate_logbook(in.source_shifts, day_arg(s.day), s.fleet_size, s.seed);
    const auto orders = book.orders();
    write_logbook(a.out, orders);
    json warnings = book.warnings;
    write_manifest(manifest_for_file(a.out), {{"command", "gen-logbook"},
                                               {"scenario", json::parse(scenario_to_json(s, -1))},
                                               {"source_shifts", in.source_shifts.size()},
                                               {"dismissed_shifts", in.dismissed_shifts},
                                               {"vehicles", book.vehicles.size()},
                                               {"shifts", book.shift_count()},
                                               {"orders", orders.size()},
                                               {"warnings", warnings}});
    for (const auto& w : book.warnings) {
        std::cerr << "warning: " << w << '\n';
    }
    std::cout << book.vehicles.size() << " vehicles, " << book.shift_count() << " shifts, " << orders.size()
              << " orders -> " << a.out << '\n';
    return 0;
}

// ---- derive-hotspots ------------------------------------------------------

struct HotspotArgs {
    std::string logbook;
    std::string boundary;
    std::size_t target = 60;
    std::size_t min_pts = 10;
    std::size_t max_points = 20000;
    std::optional<double> eps;
    std::string out = "hotspots.csv";
};

int cmd_derive_hotspots(const HotspotArgs& a)
{
    const auto parsed = parse_logbook(a.logbook);
    std::vector<Shift> shifts = extract_shifts(parsed.orders);
    if (!a.boundary.empty()) {
        shifts = filter_out_of_area(shifts, load_polygon(a.boundary)).kept;
    }
    std::vector<LatLon> pickups;
    for (const auto& s : shifts) {
        for (const auto& r : s.rides) {
            pickups.push_back(r.pickup_location);
        }
    }
    const auto sample = thin_points(pickups, a.max_points);
    HotspotSet set = a.eps ? hotspots_at(sample, *a.eps, a.min_pts) : derive_hotspots(sample, a.target, a.min_pts);
    set.target_count = a.target;
    write_hotspots(set, a.out);
    for (const auto& w : set.warnings) {
        std::cerr << "warning: " << w << '\n';
    }
    std::cout << set.size() << " hotspots at eps " << format_fixed(set.eps_m, 1) << " m (min_pts " << set.min_pts
              << ", " << sample.size() << " of " << pickups.size() << " pickups) -> " << a.out << '\n';
    return 0;
}

// ---- simulate -------------------------------------------------------------

struct SimulateArgs {
    std::string config;
    ScenarioOverrides over;
    std::string logbook;
    std::string out = "run";
};

int cmd_simulate(SimulateArgs a)
{
    ScenarioFile s = load_scenario_file(a.config);
    a.over.apply(s);
    if (!a.logbook.empty()) {
        s.logbook_path = a.logbook;
    }
    const ScenarioInputs in = load_scenario_inputs(s, s.strategy == Strategy::Hotspot);
    for (const auto& w : in.warnings) {
        std::cerr << "warning: " << w << '\n';
    }
    const PlannedRun run{s.day, s.strategy, s.seed};
    const RunResult r = execute_run(s, in, run, a.out);
    if (!r.ok) {
        std::cerr << "simulate: " << r.error << '\n';
        return kExitData;
    }
    std::cout << run_dir_name(run) << ": " << r.trips << " trips -> " << a.out << '\n';
    print_kpis(std::cout, r.kpis);
    return 0;
}

// ---- batch ----------------------------------------------------------------

struct BatchArgs {
    std::string config;
    std::optional<std::size_t> parallel;
    std::string out = "batch";
};

int cmd_batch(const BatchArgs& a)
{
    ExperimentPlan plan = load_plan(a.config);
    if (a.parallel) {
        plan.parallel = *a.parallel;
    }
    plan.validate();
    const BatchResult b = run_batch(plan, a.out, &std::cerr);
    json runs = json::array();
    for (const auto& r : b.runs) {
        runs.push_back({{"run", run_dir_name(r.run)}, {"ok", r.ok}, {"error", r.error}});
    }
    write_manifest(fs::path(a.out) / "manifest.json", {{"command", "batch"},
                                                        {"plan", a.config},
                                                        {"parallel", plan.parallel},
                                                        {"scenario", json::parse(scenario_to_json(plan.scenario, -1))},
                                                        {"runs", runs}});
    if (b.has_table) {
        write_kpi_text(std::cout, b.table);
    }
    std::cout << (b.runs.size() - b.failed) << " of " << b.runs.size() << " runs succeeded -> " << a.out << '\n';
    return b.failed == 0 ? 0 : kExitPartial;
}

// ---- kpi ------------------------------------------------------------------

struct KpiArgs {
    std::vector<std::string> runs;
    std::string baseline = "return";
    std::string emission_table;
    std::string out;
};

// A run directory as written by simulate or batch: outputs plus manifest.json.
std::vector<fs::path> run_dirs(const std::vector<std::string>& roots)
{
    std::vector<fs::path> dirs;
    for (const auto& root : roots) {
        if (fs::exists(fs::path(root) / "trips.csv")) {
            dirs.emplace_back(root);
            continue;
        }
        if (!fs::is_directory(root)) {
            throw DataError("not a run or batch directory: " + root);
        }
        for (const auto& e : fs::directory_iterator(root)) {
            if (e.is_directory() && fs::exists(e.path() / "trips.csv")) {
                dirs.push_back(e.path());
            }
        }
    }
    std::sort(dirs.begin(), dirs.end());
    return dirs;
}

TaggedRun load_tagged_run(const fs::path& dir, const EmissionFactorTable* table_override)
{
    const json m = json::parse(read_text((dir / "manifest.json").string()));
    TaggedRun t;
    t.day = m.at("run").at("day").get<std::string>();
    const auto st = parse_strategy(m.at("run").at("strategy").get<std::string>());
    if (!st) {
        throw DataError("bad strategy in " + (dir / "manifest.json").string());
    }
    t.strategy = *st;
    t.seed = m.at("run").at("seed").get<std::uint64_t>();
    const auto& sc = m.at("scenario");
    EmissionFactorTable table;
    if (table_override) {
        table = *table_override;
    } else {
        const std::string path = sc.value("emission_table", std::string());
        table = path.empty() ? default_factor_table() : load_factor_table(path);
    }
    const bool per_edge = sc.value("emission_mode", std::string("trip")) == "edge";
    std::optional<RoadGraph> graph;
    if (per_edge) {
        graph = load_network(sc.at("network").get<std::string>());
    }
    const SimOutput out = read_sim_output(dir.string(), graph ? &*graph : nullptr);
    t.kpis = summarize_run(out, table, per_edge ? EmissionMode::PerEdge : EmissionMode::TripMeanSpeed,
                           graph ? &*graph : nullptr);
    return t;
}

int cmd_kpi(const KpiArgs& a)
{
    const auto baseline = strategy_arg(a.baseline);
    std::optional<EmissionFactorTable> table;
    if (!a.emission_table.empty()) {
        table = load_factor_table(a.emission_table);
    }
    std::vector<TaggedRun> runs;
    for (const auto& d : run_dirs(a.runs)) {
        runs.push_back(load_tagged_run(d, table ? &*table : nullptr));
    }
    if (runs.empty()) {
        throw DataError("kpi: no run directories found");
    }
    const KpiTable kt = build_kpi_table(runs, baseline.value_or(Strategy::Return));
    if (!a.out.empty()) {
        fs::create_directories(a.out);
        std::ofstream csv(fs::path(a.out) / "kpi.csv");
        write_kpi_csv(csv, kt);
        std::ofstream txt(fs::path(a.out) / "kpi.txt");
        write_kpi_text(txt, kt);
    }
    write_kpi_text(std::cout, kt);
    return 0;
}

// ---- validate -------------------------------------------------------------

struct ValidateArgs {
    std::string run;
    std::string reference;
    double threshold = 200.0;
    double bin = 50.0;
    std::string out;
};

int cmd_validate(const ValidateArgs& a)
{
    const SimOutput out = read_sim_output(a.run);
    const std::string ref_path = a.reference.empty() ? (fs::path(a.run) / "logbook.csv").string() : a.reference;
    const auto ref = parse_logbook(ref_path);
    const ValidationReport r = validation_metrics(out, ref.orders, a.threshold);
    const fs::path dir = a.out.empty() ? fs::path(a.run) : fs::path(a.out);
    fs::create_directories(dir);
    {
        std::ofstream h(dir / "validation_histogram.csv");
        write_validation_histogram(h, r, a.bin);
        std::ofstream s(dir / "validation_summary.txt");
        write_validation_summary(s, r);
    }
    write_validation_summary(std::cout, r);
    return 0;
}

// ---- extrapolate ----------------------------------------------------------

struct ExtrapolateArgs {
    std::string config;
    std::string batch;
    std::string weekday = "wednesday";
    std::string weekend = "saturday";
    std::string out;
};

int cmd_extrapolate(const ExtrapolateArgs& a)
{
    std::string text = read_text(a.config);
    if (!a.batch.empty()) {
        // replace the strategy adjustments with the ones measured in a batch
        json j = json::parse(text);
        if (!j.contains("days")) {
            throw ConfigError("extrapolate: --batch needs per-day inputs, not totals");
        }
        std::vector<TaggedRun> runs;
        for (const auto& d : run_dirs({a.batch})) {
            runs.push_back(load_tagged_run(d, nullptr));
        }
        const KpiTable kt = build_kpi_table(runs, Strategy::Return);
        json strategies = json::array();
        for (Strategy s : kt.strategies) {
            const StrategyAdjustment adj = adjustment_from_kpis(kt, s, a.weekday, a.weekend);
            const auto c = [](const ReasonChanges& r) {
                return json{{"pickup", r.pickup}, {"ride", r.ride}, {"rebalancing", r.rebalancing}};
            };
            strategies.push_back({{"name", adj.name}, {"weekday", c(adj.weekday)}, {"weekend", c(adj.weekend)}});
        }
        j["strategies"] = strategies;
        text = j.dump();
    }
    const ExtrapolationTable t = run_extrapolation_json(text);
    if (!a.out.empty()) {
        std::ofstream f(a.out);
        if (!f) {
            throw DataError("cannot write " + a.out);
        }
        write_extrapolation_csv(f, t);
    }
    write_extrapolation_csv(std::cout, t);
    return 0;
}

// ---- analyze --------------------------------------------------------------

struct AnalyzeArgs {
    std::string config;
    std::string logbook;
    std::string out;
};

int cmd_analyze(const AnalyzeArgs& a)
{
    ScenarioFile s = load_scenario_file(a.config);
    if (!a.logbook.empty()) {
        s.source_logbook_path = a.logbook;
    }
    s.logbook_path.clear();
    const ScenarioInputs in = load_scenario_inputs(s, false);
    const NetworkTravelModel model(in.graph);
    const FollowUpStats fu = follow_up_statistics(in.source_shifts, model, s.pob);
    const MileageReport mr = static_mileage_report(in.source_shifts, model, s.pob);
    std::cout << in.source_shifts.size() << " shifts kept, " << in.dismissed_shifts << " dismissed (out of area)\n";
    write_follow_up_report(std::cout, fu);
    write_mileage_report(std::cout, mr);
    if (!a.out.empty()) {
        fs::create_directories(a.out);
        std::ofstream f(fs::path(a.out) / "follow_up.csv");
        write_follow_up_report(f, fu);
        std::ofstream m(fs::path(a.out) / "mileage.csv");
        write_mileage_report(m, mr);
    }
    return 0;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"ridesim: ride-hailing fleet simulator and analysis toolkit"};
    app.require_subcommand(1);

    GenDemandArgs gd;
    auto* c_gd = app.add_subcommand("gen-demand", "synthesize a year of operator logbook");
    c_gd->add_option("--config", gd.config, "demand parameters JSON");
    c_gd->add_option("--seed", gd.seed);
    c_gd->add_option("--network", gd.network, "time legs on this network instead of crow-fly");
    c_gd->add_option("--days", gd.days);
    c_gd->add_option("--out", gd.out, "logbook CSV");

    GenLogbookArgs gl;
    auto* c_gl = app.add_subcommand("gen-logbook", "assemble one day's logbook from historical shifts");
    c_gl->add_option("--config", gl.config, "scenario JSON")->required();
    gl.over.add_to(c_gl);
    c_gl->add_option("--out", gl.out, "logbook CSV");

    HotspotArgs hs;
    auto* c_hs = app.add_subcommand("derive-hotspots", "cluster historical pickups into hotspots");
    c_hs->add_option("--logbook", hs.logbook)->required();
    c_hs->add_option("--boundary", hs.boundary, "drop shifts leaving this polygon first");
    c_hs->add_option("--target", hs.target);
    c_hs->add_option("--min-pts", hs.min_pts);
    c_hs->add_option("--max-points", hs.max_points, "thin the pickups to at most this many (0: all)");
    c_hs->add_option("--eps", hs.eps, "fixed eps in metres instead of searching");
    c_hs->add_option("--out", hs.out, "hotspot CSV");

    SimulateArgs sim;
    auto* c_sim = app.add_subcommand("simulate", "run one simulated day");
    c_sim->add_option("--config", sim.config, "scenario JSON")->required();
    sim.over.add_to(c_sim);
    c_sim->add_option("--logbook", sim.logbook, "use this daily logbook instead of drawing one");
    c_sim->add_option("--out", sim.out, "run directory");

    BatchArgs ba;
    auto* c_ba = app.add_subcommand("batch", "run an experiment plan");
    c_ba->add_option("--config", ba.config, "plan JSON")->required();
    c_ba->add_option("--parallel", ba.parallel)->check(CLI::PositiveNumber);
    c_ba->add_option("--out", ba.out, "batch directory");

    KpiArgs kp;
    auto* c_kp = app.add_subcommand("kpi", "merge run directories into a KPI table");
    c_kp->add_option("runs", kp.runs, "run or batch directories")->required();
    c_kp->add_option("--strategy", kp.baseline, "baseline strategy");
    c_kp->add_option("--emission-table", kp.emission_table);
    c_kp->add_option("--out", kp.out, "directory for kpi.csv and kpi.txt");

    ValidateArgs va;
    auto* c_va = app.add_subcommand("validate", "compare simulated times against the reference logbook");
    c_va->add_option("--run", va.run, "run directory")->required();
    c_va->add_option("--reference", va.reference, "reference logbook (default: the run's logbook.csv)");
    c_va->add_option("--threshold", va.threshold, "seconds");
    c_va->add_option("--bin", va.bin, "histogram bin width, s");
    c_va->add_option("--out", va.out, "output directory (default: the run directory)");

    ExtrapolateArgs ex;
    auto* c_ex = app.add_subcommand("extrapolate", "annual mileage and CO2 extrapolation");
    c_ex->add_option("--config", ex.config, "inputs JSON (per-day series or yearly totals)")->required();
    c_ex->add_option("--batch", ex.batch, "take strategy changes from this batch directory");
    c_ex->add_option("--weekday", ex.weekday, "simulated day standing for Monday-Thursday");
    c_ex->add_option("--weekend", ex.weekend, "simulated day standing for Friday-Sunday");
    c_ex->add_option("--out", ex.out, "CSV file");

    AnalyzeArgs an;
    auto* c_an = app.add_subcommand("analyze", "follow-up categories and empty-network mileage of a logbook");
    c_an->add_option("--config", an.config, "scenario JSON")->required();
    c_an->add_option("--logbook", an.logbook, "logbook to analyse (default: the scenario's source)");
    c_an->add_option("--out", an.out, "directory for CSV reports");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kExitUsage;
    }

    try {
        if (*c_gd) {
            return cmd_gen_demand(gd);
        }
        if (*c_gl) {
            return cmd_gen_logbook(gl);
        }
        if (*c_hs) {
            return cmd_derive_hotspots(hs);
        }
        if (*c_sim) {
            return cmd_simulate(sim);
        }
        if (*c_ba) {
            return cmd_batch(ba);
        }
        if (*c_kp) {
            return cmd_kpi(kp);
        }
        if (*c_va) {
            return cmd_validate(va);
        }
        if (*c_ex) {
            return cmd_extrapolate(ex);
        }
        if (*c_an) {
            return cmd_analyze(an);
        }
    } catch (const CLI::ValidationError& e) {
        std::cerr << "ridesim: " << e.what() << '\n';
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "ridesim: " << e.what() << '\n';
        return kExitData;
    }
    return kExitUsage;
}
