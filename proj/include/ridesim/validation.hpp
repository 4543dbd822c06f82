#pragma once

#include "ridesim/fleet_sim.hpp"
#include "ridesim/logbook.hpp"

#include <iosfwd>
#include <span>
#include <string>
#include <vector>

namespace ridesim {

/// Middle value; mean of the two middle values for even counts. 0 when empty.
double median(std::vector<double> values);

/// Fraction of values with |v| < threshold (strict). 0 when empty.
double share_abs_below(std::span<const double> values, double threshold);

struct ValidationReport {
    double threshold_s = 200.0;
    std::vector<std::string> matched_ids;
    std::vector<double> travel_time_diff_s; // (sim dropoff - sim pickup) - (ref dropoff - ref pickup)
    std::vector<double> pickup_diff_s;      // sim pickup - ref pickup
    double travel_time_median_s = 0.0;
    double pickup_median_s = 0.0;
    double travel_time_share_below = 0.0;
    double pickup_share_below = 0.0;
    std::vector<std::string> unmatched; // reference orders without a served outcome, and vice versa
};

/// Joins on order id; only served orders take part.
ValidationReport validation_metrics(const SimOutput& output, std::span<const RideOrder> reference,
                                    double threshold_s = 200.0);

/// Recomputes medians and shares for the given diffs.
ValidationReport report_from_diffs(std::vector<double> travel_time_diff_s, std::vector<double> pickup_diff_s,
                                   double threshold_s = 200.0);

/// Histogram CSV with fixed-width bins [k*w, (k+1)*w), both distributions side by side.
void write_validation_histogram(std::ostream& out, const ValidationReport& report, double bin_s = 50.0);
void write_validation_summary(std::ostream& out, const ValidationReport& report);

} // namespace ridesim
