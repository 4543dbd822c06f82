#pragma once

#include "ridesim/logbook.hpp"
#include "ridesim/travel_model.hpp"

#include <array>
#include <cstdint>
#include <string>
#include <vector>

namespace ridesim {

struct DemandAnchor {
    LatLon pos;
    double sigma_m = 220.0;
    double weight = 1.0; // relative within the anchor group
};

/// Parameters of the synthetic operator year. Pickups come from a mixture of
/// a centre Gaussian, compact hotspot anchors and the PoB; weights of the
/// three groups must sum to 1.
struct DemandParams {
    std::string first_date = "2023-01-01";
    int days = 365;
    std::int32_t utc_offset_s = 3600;
    std::size_t fleet_size = 50;

    // Monday first
    std::array<int, 7> daily_orders{320, 200, 330, 340, 400, 440, 380};
    std::array<double, 7> during_ride_share{0.34, 0.36, 0.31, 0.35, 0.43, 0.48, 0.46};
    double at_pob_share = 0.10;

    double mean_rides_per_shift = 4.0;
    // relative weight of a shift starting in each local hour
    std::array<double, 24> shift_start_weights{1, 1, 1, 1, 1, 2, 4, 6, 6, 5, 4, 4, 4, 4, 4, 5, 6, 6, 5, 4, 4, 3, 2, 1};

    LatLon center{52.5150, 13.3900};
    double half_extent_m = 6800.0; // square service area around the centre
    double center_sigma_m = 3700.0;
    double center_weight = 0.45;

    std::vector<DemandAnchor> anchors; // generated when empty
    std::size_t anchor_count = 60;
    double anchor_spread_m = 3000.0;
    double anchor_min_separation_m = 900.0;
    double anchor_sigma_m = 200.0;
    double anchor_weight = 0.45;

    LatLon pob{52.5285, 13.3532};
    double pob_sigma_m = 150.0;
    double pob_weight = 0.10;

    // The operator hands an order to a nearby car: each pickup is the nearest
    // of this many independent draws to where the car starts its pickup leg.
    int dispatch_candidates = 4;

    double ride_median_m = 5000.0;
    double ride_log_sigma = 0.55;
    double min_ride_m = 400.0;

    double outside_share = 0.03; // rides touching the far anchor outside the area
    LatLon outside_anchor{52.3667, 13.5033};

    double travel_time_noise = 0.08; // log-sd applied to modelled leg times
    double boarding_min_s = 30.0;
    double boarding_max_s = 150.0;
    double at_pob_wait_mean_s = 1500.0;

    /// Throws ConfigError for negative counts, shares outside [0, 1], group
    /// weights not summing to 1 or non-positive scales.
    void validate() const;
};

DemandParams parse_demand_params(const std::string& json_text);
DemandParams load_demand_params(const std::string& path);
std::string demand_params_to_json(const DemandParams& p);

/// Anchor positions for the params' seed-independent layout, or the explicit list.
std::vector<DemandAnchor> resolve_anchors(const DemandParams& p, std::uint64_t seed);

/// Full synthetic logbook: shifts of `fleet_size` vehicles over `days` days.
/// Follow-up orders are timed against `model` so that classifying the result
/// with the same model recovers the drawn categories. Deterministic in
/// (params, seed, model).
std::vector<RideOrder> synthesize_demand(const DemandParams& params, std::uint64_t seed, const TravelModel& model);

} // namespace ridesim
