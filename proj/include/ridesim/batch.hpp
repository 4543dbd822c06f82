#pragma once

#include "ridesim/kpi.hpp"
#include "ridesim/scenario_config.hpp"

#include <iosfwd>
#include <string>
#include <vector>

namespace ridesim {

struct PlannedRun {
    std::string day; // weekday name
    Strategy strategy = Strategy::Return;
    std::uint64_t seed = 0;
};

struct ExperimentPlan {
    ScenarioFile scenario;
    std::vector<PlannedRun> runs;
    std::size_t parallel = 1;

    /// Throws ConfigError on duplicate (day, strategy, seed), unknown days or parallel == 0.
    void validate() const;
};

/// JSON: {"scenario": "scenario.json", "days": [...], "strategies": [...],
/// "seeds": [...], "parallel": n}; runs are the full cross product.
ExperimentPlan parse_plan(const std::string& json_text, const std::string& base_dir);
ExperimentPlan load_plan(const std::string& path);

std::string run_dir_name(const PlannedRun& run);

struct RunResult {
    PlannedRun run;
    bool ok = false;
    std::string error;
    std::string dir;
    RunKpis kpis;
    std::size_t orders = 0;
    std::size_t trips = 0;
};

/// Simulates one run and writes trips/orders/shifts/logbook/manifest into `dir`.
/// Failures are captured in the result, never thrown.
RunResult execute_run(const ScenarioFile& scenario, const ScenarioInputs& inputs, const PlannedRun& run,
                      const std::string& dir);

struct BatchResult {
    std::vector<RunResult> runs; // plan order
    std::size_t failed = 0;
    bool has_table = false;
    KpiTable table;
};

/// Executes the plan with up to plan.parallel worker threads, then writes
/// kpi.csv and kpi.txt (merged over successful runs) into `out_dir`.
/// Output does not depend on the degree of parallelism.
BatchResult run_batch(const ExperimentPlan& plan, const std::string& out_dir, std::ostream* log = nullptr);

} // namespace ridesim
