#include "ridesim/batch.hpp"

#include "ridesim/csv.hpp"
#include "ridesim/error.hpp"
#include "ridesim/sim_io.hpp"

#include "json.hpp"

#include <atomic>
#include <filesystem>
#include <fstream>
#include <mutex>
#include <ostream>
#include <set>
#include <sstream>
#include <thread>
#include <tuple>

namespace ridesim {

using nlohmann::json;

void ExperimentPlan::validate() const
{
    if (parallel == 0) {
        throw ConfigError("plan: parallel must be >= 1");
    }
    std::set<std::tuple<std::string, Strategy, std::uint64_t>> seen;
    for (const auto& r : runs) {
        if (!parse_weekday(r.day)) {
            throw ConfigError("plan: unknown day '" + r.day + "'");
        }
        if (!seen.emplace(r.day, r.strategy, r.seed).second) {
            throw ConfigError("plan: duplicate run " + run_dir_name(r));
        }
    }
}

ExperimentPlan parse_plan(const std::string& json_text, const std::string& base_dir)
{
    ExperimentPlan plan;
    try {
        const json j = json::parse(json_text);
        std::filesystem::path sp(j.at("scenario").get<std::string>());
        if (sp.is_relative() && !base_dir.empty()) {
            sp = std::filesystem::path(base_dir) / sp;
        }
        plan.scenario = load_scenario_file(sp.lexically_normal().string());
        if (j.contains("fleet_size")) {
            plan.scenario.fleet_size = j.at("fleet_size").get<std::size_t>();
        }
        plan.parallel = j.value("parallel", std::size_t{1});
        for (const auto& d : j.at("days")) {
            for (const auto& s : j.at("strategies")) {
                const auto st = parse_strategy(s.get<std::string>());
                if (!st) {
                    throw ConfigError("plan: unknown strategy " + s.dump());
                }
                for (const auto& seed : j.at("seeds")) {
                    plan.runs.push_back({d.get<std::string>(), *st, seed.get<std::uint64_t>()});
                }
            }
        }
    } catch (const json::exception& e) {
        throw ConfigError(std::string("plan: ") + e.what());
    }
    plan.validate();
    return plan;
}

ExperimentPlan load_plan(const std::string& path)
{
    std::ifstream in(path);
    if (!in) {
        throw ConfigError("cannot open plan " + path);
    }
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_plan(ss.str(), std::filesystem::path(path).parent_path().string());
}

std::string run_dir_name(const PlannedRun& run)
{
    return run.day + "_" + std::string(strategy_name(run.strategy)) + "_s" + std::to_string(run.seed);
}

RunResult execute_run(const ScenarioFile& scenario, const ScenarioInputs& inputs, const PlannedRun& run,
                      const std::string& dir)
{
    RunResult result;
    result.run = run;
    result.dir = dir;
    try {
        const auto day = parse_weekday(run.day);
        if (!day) {
            throw ConfigError("unknown day '" + run.day + "'");
        }
        const ScenarioConfig cfg = make_config(scenario, inputs, run.strategy, run.seed);
        const SyntheticLogbook book = logbook_for(scenario, inputs, *day, run.seed);
        const SimOutput out = run_simulation(cfg, book, *inputs.graph);
        result.kpis = summarize_run(out, inputs.emission_table, scenario.emission_mode, inputs.graph.get());
        result.orders = out.orders.size();
        result.trips = out.trips.size();

        std::filesystem::create_directories(dir);
        write_sim_output(dir, out, *inputs.graph);
        const auto orders = book.orders();
        write_logbook((std::filesystem::path(dir) / "logbook.csv").string(), orders);

        ScenarioFile resolved = scenario;
        resolved.strategy = run.strategy;
        resolved.seed = run.seed;
        resolved.day = run.day;
        json manifest;
        manifest["run"] = {{"day", run.day}, {"strategy", std::string(strategy_name(run.strategy))}, {"seed", run.seed}};
        manifest["scenario"] = json::parse(scenario_to_json(resolved, -1));
        json profile = json::array();
        for (const auto& b : cfg.profile.breakpoints()) {
            profile.push_back({{"start_s", b.start_s}, {"factor", b.factor}});
        }
        manifest["speed_profile_breakpoints"] = profile;
        manifest["hotspot_count"] = cfg.hotspots ? cfg.hotspots->size() : 0;
        manifest["vehicles"] = book.vehicles.size();
        manifest["shifts"] = book.shift_count();
        manifest["orders"] = out.orders.size();
        manifest["trips"] = out.trips.size();
        manifest["events"] = out.events_processed;
        manifest["mileage_m"] = {{"pickup", format_mm_as_m(result.kpis.pickup_mm)},
                                 {"ride", format_mm_as_m(result.kpis.ride_mm)},
                                 {"rebalancing", format_mm_as_m(result.kpis.rebalancing_mm)},
                                 {"total", format_mm_as_m(result.kpis.total_mm())}};
        json warnings = book.warnings;
        for (const auto& w : out.warnings) {
            warnings.push_back(w);
        }
        manifest["warnings"] = warnings;
        std::ofstream mf(std::filesystem::path(dir) / "manifest.json");
        mf << manifest.dump(2) << '\n';
        result.ok = true;
    } catch (const std::exception& e) {
        result.ok = false;
        result.error = e.what();
    }
    return result;
}

BatchResult run_batch(const ExperimentPlan& plan, const std::string& out_dir, std::ostream* log)
{
    plan.validate();
    bool need_hotspots = false;
    for (const auto& r : plan.runs) {
        need_hotspots = need_hotspots || r.strategy == Strategy::Hotspot;
    }
    const ScenarioInputs inputs = load_scenario_inputs(plan.scenario, need_hotspots);
    std::filesystem::create_directories(out_dir);

    BatchResult batch;
    batch.runs.resize(plan.runs.size());
    std::atomic<std::size_t> next{0};
    std::mutex log_mutex;
    const auto worker = [&] {
        for (std::size_t i = next++; i < plan.runs.size(); i = next++) {
            const auto& run = plan.runs[i];
            batch.runs[i] =
                execute_run(plan.scenario, inputs, run, (std::filesystem::path(out_dir) / run_dir_name(run)).string());
            if (log) {
                const std::lock_guard lock(log_mutex);
                *log << (batch.runs[i].ok ? "ok     " : "FAILED ") << run_dir_name(run);
                if (!batch.runs[i].ok) {
                    *log << ": " << batch.runs[i].error;
                }
                *log << '\n';
            }
        }
    };
    const std::size_t threads = std::min(plan.parallel, std::max<std::size_t>(plan.runs.size(), 1));
    std::vector<std::thread> pool;
    for (std::size_t t = 1; t < threads; ++t) {
        pool.emplace_back(worker);
    }
    worker();
    for (auto& t : pool) {
        t.join();
    }

    std::vector<TaggedRun> tagged;
    for (const auto& r : batch.runs) {
        if (r.ok) {
            tagged.push_back({r.run.day, r.run.strategy, r.run.seed, r.kpis});
        } else {
            ++batch.failed;
        }
    }
    if (!tagged.empty()) {
        try {
            batch.table = build_kpi_table(tagged, Strategy::Return);
            batch.has_table = true;
        } catch (const DataError&) {
            // no Return baseline: fall back to the first strategy present
            batch.table = build_kpi_table(tagged, tagged.front().strategy);
            batch.has_table = true;
        }
        std::ofstream csv(std::filesystem::path(out_dir) / "kpi.csv");
        write_kpi_csv(csv, batch.table);
        std::ofstream txt(std::filesystem::path(out_dir) / "kpi.txt");
        write_kpi_text(txt, batch.table);
    }
    std::ofstream status(std::filesystem::path(out_dir) / "batch_status.csv");
    status << "run,ok,error\n";
    for (const auto& r : batch.runs) {
        status << run_dir_name(r.run) << ',' << (r.ok ? 1 : 0) << ',' << csv_escape(r.error) << '\n';
    }
    return batch;
}

} // namespace ridesim
