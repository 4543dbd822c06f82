#pragma once

#include "ridesim/fleet_sim.hpp"

#include <iosfwd>
#include <string>

namespace ridesim {

/// trips.csv. Route edges are written by edge id, space separated.
void write_trips(std::ostream& out, const SimOutput& output, const RoadGraph& graph);
void write_orders(std::ostream& out, const SimOutput& output);
void write_shifts(std::ostream& out, const SimOutput& output);

/// Writes trips.csv, orders.csv and shifts.csv into `dir` (created if needed).
void write_sim_output(const std::string& dir, const SimOutput& output, const RoadGraph& graph);

/// Reads back a run directory. With a graph, trip routes are restored;
/// without one they stay empty but distances and times are exact.
SimOutput read_sim_output(const std::string& dir, const RoadGraph* graph = nullptr);

} // namespace ridesim
