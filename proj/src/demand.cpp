#include "ridesim/demand.hpp"

#include "ridesim/error.hpp"
#include "ridesim/random.hpp"

#include "json.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <numeric>
#include <sstream>

namespace ridesim {

using nlohmann::json;

void DemandParams::validate() const
{
    const auto fail = [](const std::string& m) { throw ConfigError("demand params: " + m); };
    if (!parse_date(first_date)) {
        fail("first_date is not YYYY-MM-DD");
    }
    if (days < 0) {
        fail("days must be >= 0");
    }
    if (fleet_size == 0) {
        fail("fleet_size must be >= 1");
    }
    for (std::size_t i = 0; i < 7; ++i) {
        if (daily_orders[i] < 0) {
            fail("negative daily order count");
        }
        if (during_ride_share[i] < 0.0 || during_ride_share[i] + at_pob_share > 1.0) {
            fail("follow-up shares must lie in [0, 1] and leave room for DuringReturn");
        }
    }
    if (at_pob_share < 0.0 || outside_share < 0.0 || outside_share > 1.0) {
        fail("shares must lie in [0, 1]");
    }
    if (center_weight < 0.0 || anchor_weight < 0.0 || pob_weight < 0.0 ||
        std::abs(center_weight + anchor_weight + pob_weight - 1.0) > 1e-9) {
        fail("center_weight + anchor_weight + pob_weight must equal 1");
    }
    if (dispatch_candidates < 1) {
        fail("dispatch_candidates must be >= 1");
    }
    if (!(mean_rides_per_shift >= 1.0) || !(half_extent_m > 0.0) || !(center_sigma_m > 0.0) ||
        !(anchor_sigma_m > 0.0) || !(pob_sigma_m > 0.0) || !(ride_median_m > 0.0) || ride_log_sigma < 0.0 ||
        travel_time_noise < 0.0 || boarding_min_s < 0.0 || boarding_max_s < boarding_min_s ||
        !(at_pob_wait_mean_s > 0.0)) {
        fail("scale parameters must be positive");
    }
    if (std::accumulate(shift_start_weights.begin(), shift_start_weights.end(), 0.0) <= 0.0 ||
        std::any_of(shift_start_weights.begin(), shift_start_weights.end(), [](double w) { return w < 0.0; })) {
        fail("shift_start_weights must be non-negative with a positive sum");
    }
    for (const auto& a : anchors) {
        if (!is_finite(a.pos) || !(a.sigma_m > 0.0) || a.weight < 0.0) {
            fail("bad anchor");
        }
    }
    if (anchor_weight > 0.0 && anchors.empty() && anchor_count == 0) {
        fail("anchor_weight > 0 but no anchors");
    }
}

namespace {

LatLon read_latlon(const json& j)
{
    return {j.at("lat").get<double>(), j.at("lon").get<double>()};
}

json write_latlon(LatLon p)
{
    return {{"lat", p.lat}, {"lon", p.lon}};
}

template <typename T>
void maybe(const json& j, const char* key, T& out)
{
    if (j.contains(key)) {
        out = j.at(key).get<T>();
    }
}

} // namespace

DemandParams parse_demand_params(const std::string& json_text)
{
    DemandParams p;
    try {
        const json j = json::parse(json_text);
        maybe(j, "first_date", p.first_date);
        maybe(j, "days", p.days);
        maybe(j, "utc_offset_s", p.utc_offset_s);
        maybe(j, "fleet_size", p.fleet_size);
        maybe(j, "daily_orders", p.daily_orders);
        maybe(j, "during_ride_share", p.during_ride_share);
        maybe(j, "at_pob_share", p.at_pob_share);
        maybe(j, "mean_rides_per_shift", p.mean_rides_per_shift);
        maybe(j, "shift_start_weights", p.shift_start_weights);
        if (j.contains("center")) {
            p.center = read_latlon(j.at("center"));
        }
        maybe(j, "half_extent_m", p.half_extent_m);
        maybe(j, "center_sigma_m", p.center_sigma_m);
        maybe(j, "center_weight", p.center_weight);
        if (j.contains("anchors")) {
            for (const auto& a : j.at("anchors")) {
                p.anchors.push_back({read_latlon(a), a.value("sigma_m", p.anchor_sigma_m), a.value("weight", 1.0)});
            }
        }
        maybe(j, "anchor_count", p.anchor_count);
        maybe(j, "anchor_spread_m", p.anchor_spread_m);
        maybe(j, "anchor_min_separation_m", p.anchor_min_separation_m);
        maybe(j, "anchor_sigma_m", p.anchor_sigma_m);
        maybe(j, "anchor_weight", p.anchor_weight);
        if (j.contains("pob")) {
            p.pob = read_latlon(j.at("pob"));
        }
        maybe(j, "pob_sigma_m", p.pob_sigma_m);
        maybe(j, "pob_weight", p.pob_weight);
        maybe(j, "dispatch_candidates", p.dispatch_candidates);
        maybe(j, "ride_median_m", p.ride_median_m);
        maybe(j, "ride_log_sigma", p.ride_log_sigma);
        maybe(j, "min_ride_m", p.min_ride_m);
        maybe(j, "outside_share", p.outside_share);
        if (j.contains("outside_anchor")) {
            p.outside_anchor = read_latlon(j.at("outside_anchor"));
        }
        maybe(j, "travel_time_noise", p.travel_time_noise);
        maybe(j, "boarding_min_s", p.boarding_min_s);
        maybe(j, "boarding_max_s", p.boarding_max_s);
        maybe(j, "at_pob_wait_mean_s", p.at_pob_wait_mean_s);
    } catch (const json::exception& e) {
        throw ConfigError(std::string("demand params: ") + e.what());
    }
    p.validate();
    return p;
}

DemandParams load_demand_params(const std::string& path)
{
    std::ifstream in(path);
    if (!in) {
        throw ConfigError("cannot open " + path);
    }
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_demand_params(ss.str());
}

std::string demand_params_to_json(const DemandParams& p)
{
    json j;
    j["first_date"] = p.first_date;
    j["days"] = p.days;
    j["utc_offset_s"] = p.utc_offset_s;
    j["fleet_size"] = p.fleet_size;
    j["daily_orders"] = p.daily_orders;
    j["during_ride_share"] = p.during_ride_share;
    j["at_pob_share"] = p.at_pob_share;
    j["mean_rides_per_shift"] = p.mean_rides_per_shift;
    j["shift_start_weights"] = p.shift_start_weights;
    j["center"] = write_latlon(p.center);
    j["half_extent_m"] = p.half_extent_m;
    j["center_sigma_m"] = p.center_sigma_m;
    j["center_weight"] = p.center_weight;
    if (!p.anchors.empty()) {
        json a = json::array();
        for (const auto& x : p.anchors) {
            a.push_back({{"lat", x.pos.lat}, {"lon", x.pos.lon}, {"sigma_m", x.sigma_m}, {"weight", x.weight}});
        }
        j["anchors"] = a;
    }
    j["anchor_count"] = p.anchor_count;
    j["anchor_spread_m"] = p.anchor_spread_m;
    j["anchor_min_separation_m"] = p.anchor_min_separation_m;
    j["anchor_sigma_m"] = p.anchor_sigma_m;
    j["anchor_weight"] = p.anchor_weight;
    j["pob"] = write_latlon(p.pob);
    j["pob_sigma_m"] = p.pob_sigma_m;
    j["pob_weight"] = p.pob_weight;
    j["dispatch_candidates"] = p.dispatch_candidates;
    j["ride_median_m"] = p.ride_median_m;
    j["ride_log_sigma"] = p.ride_log_sigma;
    j["min_ride_m"] = p.min_ride_m;
    j["outside_share"] = p.outside_share;
    j["outside_anchor"] = write_latlon(p.outside_anchor);
    j["travel_time_noise"] = p.travel_time_noise;
    j["boarding_min_s"] = p.boarding_min_s;
    j["boarding_max_s"] = p.boarding_max_s;
    j["at_pob_wait_mean_s"] = p.at_pob_wait_mean_s;
    return j.dump(2);
}

namespace {

bool in_area(const DemandParams& p, LatLon x)
{
    const double east = haversine_m(p.center, {p.center.lat, x.lon}) * (x.lon < p.center.lon ? -1.0 : 1.0);
    const double north = haversine_m(p.center, {x.lat, p.center.lon}) * (x.lat < p.center.lat ? -1.0 : 1.0);
    return std::abs(east) <= p.half_extent_m && std::abs(north) <= p.half_extent_m;
}

LatLon gaussian_point(Rng& rng, LatLon around, double sigma_m)
{
    const double e = standard_normal(rng) * sigma_m;
    const double n = standard_normal(rng) * sigma_m;
    return offset_m(around, e, n);
}

std::size_t weighted_index(Rng& rng, std::span<const double> weights, double total)
{
    double u = uniform01(rng) * total;
    for (std::size_t i = 0; i < weights.size(); ++i) {
        if (u < weights[i]) {
            return i;
        }
        u -= weights[i];
    }
    return weights.size() - 1;
}

class Synthesizer {
public:
    Synthesizer(const DemandParams& p, std::uint64_t seed, const TravelModel& model)
        : p_(p), model_(model), rng_(stream_seed(seed, "synthesize_demand")), anchors_(resolve_anchors(p, seed))
    {
        for (const auto& a : anchors_) {
            anchor_weights_.push_back(a.weight);
        }
        anchor_total_ = std::accumulate(anchor_weights_.begin(), anchor_weights_.end(), 0.0);
        hour_total_ = std::accumulate(p.shift_start_weights.begin(), p.shift_start_weights.end(), 0.0);
    }

    std::vector<RideOrder> run();

private:
    struct Pending {
        std::int64_t start_s;
        int rides;
    };

    LatLon sample_pickup();
    LatLon sample_pickup_near(LatLon from);
    LatLon sample_dropoff(LatLon pickup);
    LegEstimate leg_or_crow(LatLon a, LatLon b) const;
    double noisy(double seconds);
    std::int64_t generate_shift(const std::string& vehicle, std::int64_t start_s, int rides);

    const DemandParams& p_;
    const TravelModel& model_;
    Rng rng_;
    std::vector<DemandAnchor> anchors_;
    std::vector<double> anchor_weights_;
    double anchor_total_ = 0.0;
    double hour_total_ = 0.0;
    std::vector<RideOrder> out_;
    std::size_t next_id_ = 1;
};

LatLon Synthesizer::sample_pickup()
{
    for (int attempt = 0; attempt < 100; ++attempt) {
        const double u = uniform01(rng_);
        LatLon x;
        if (u < p_.center_weight || anchors_.empty()) {
            x = gaussian_point(rng_, p_.center, p_.center_sigma_m);
        } else if (u < p_.center_weight + p_.anchor_weight) {
            const auto& a = anchors_[weighted_index(rng_, anchor_weights_, anchor_total_)];
            x = gaussian_point(rng_, a.pos, a.sigma_m);
        } else {
            x = gaussian_point(rng_, p_.pob, p_.pob_sigma_m);
        }
        if (in_area(p_, x)) {
            return x;
        }
    }
    return p_.center;
}

LatLon Synthesizer::sample_pickup_near(LatLon from)
{
    LatLon best = sample_pickup();
    double best_d = haversine_m(from, best);
    for (int k = 1; k < p_.dispatch_candidates; ++k) {
        const LatLon x = sample_pickup();
        const double d = haversine_m(from, x);
        if (d < best_d) {
            best = x;
            best_d = d;
        }
    }
    return best;
}

LatLon Synthesizer::sample_dropoff(LatLon pickup)
{
    for (int attempt = 0; attempt < 100; ++attempt) {
        const double len =
            std::max(p_.min_ride_m, p_.ride_median_m * std::exp(p_.ride_log_sigma * standard_normal(rng_)));
        const double heading = uniform(rng_, 0.0, 2.0 * kPi);
        const LatLon x = offset_m(pickup, len * std::sin(heading), len * std::cos(heading));
        if (in_area(p_, x)) {
            return x;
        }
    }
    return p_.center;
}

LegEstimate Synthesizer::leg_or_crow(LatLon a, LatLon b) const
{
    if (auto l = model_.leg(a, b)) {
        return *l;
    }
    return *CrowFlyTravelModel().leg(a, b);
}

double Synthesizer::noisy(double seconds)
{
    return seconds * std::exp(p_.travel_time_noise * standard_normal(rng_));
}

// Emits one shift's rides and returns the final dropoff time (unix seconds).
std::int64_t Synthesizer::generate_shift(const std::string& vehicle, std::int64_t start_s, int rides)
{
    const std::int32_t off = p_.utc_offset_s;
    LatLon accept = p_.pob;
    std::int64_t order_s = start_s;
    bool during_prev_ride = false;
    LatLon prev_dropoff = p_.pob;
    std::int64_t prev_dropoff_s = start_s;
    std::int64_t last_dropoff = start_s;

    for (int k = 0; k < rides; ++k) {
        RideOrder o;
        o.order_id = "O" + std::to_string(next_id_++);
        o.vehicle_id = vehicle;
        o.order_time = {order_s, off};
        o.accept_location = accept;

        // a driver who accepted mid-ride first finishes that ride
        const LatLon leg_from = during_prev_ride ? prev_dropoff : accept;
        o.pickup_location = sample_pickup_near(leg_from);
        o.dropoff_location = sample_dropoff(o.pickup_location);
        if (bernoulli(rng_, p_.outside_share)) {
            const LatLon far = gaussian_point(rng_, p_.outside_anchor, 300.0);
            if (bernoulli(rng_, 0.5)) {
                o.pickup_location = far;
            } else {
                o.dropoff_location = far;
            }
        }

        const std::int64_t depart = during_prev_ride ? std::max(order_s, prev_dropoff_s) : order_s;
        const double to_pickup = noisy(leg_or_crow(leg_from, o.pickup_location).time_s);
        const double boarding = uniform(rng_, p_.boarding_min_s, p_.boarding_max_s);
        const std::int64_t pickup_s = depart + static_cast<std::int64_t>(std::llround(to_pickup + boarding));
        const double riding = noisy(leg_or_crow(o.pickup_location, o.dropoff_location).time_s);
        const std::int64_t dropoff_s =
            pickup_s + std::max<std::int64_t>(1, static_cast<std::int64_t>(std::llround(riding + 30.0)));
        o.pickup_time = {pickup_s, off};
        o.dropoff_time = {dropoff_s, off};
        last_dropoff = dropoff_s;
        prev_dropoff = o.dropoff_location;
        prev_dropoff_s = dropoff_s;
        out_.push_back(o);

        if (k + 1 == rides) {
            break;
        }
        const auto wd = static_cast<std::size_t>(local_weekday(o.order_time));
        const double u = uniform01(rng_);
        const auto back = model_.leg(o.dropoff_location, p_.pob);
        const std::int64_t back_s = back ? static_cast<std::int64_t>(std::ceil(back->time_s)) : 0;
        during_prev_ride = false;
        if (u < p_.during_ride_share[wd]) {
            const double f = uniform(rng_, 0.1, 1.0);
            order_s = pickup_s + static_cast<std::int64_t>(std::floor(f * static_cast<double>(dropoff_s - pickup_s)));
            accept = lerp(o.pickup_location, o.dropoff_location, f);
            during_prev_ride = true;
        } else if (u < 1.0 - p_.at_pob_share && back && back_s >= 2) {
            const double f = uniform(rng_, 0.05, 0.95);
            const auto into = 1 + static_cast<std::int64_t>(std::floor(f * static_cast<double>(back_s - 1)));
            order_s = dropoff_s + into;
            accept = lerp(o.dropoff_location, p_.pob, static_cast<double>(into) / static_cast<double>(back_s));
        } else {
            const std::int64_t cap = kDefaultMaxShiftGap.count();
            const auto wait = static_cast<std::int64_t>(std::llround(exponential(rng_, p_.at_pob_wait_mean_s)));
            order_s = dropoff_s + std::min(cap, back_s + 1 + wait);
            accept = order_s - dropoff_s > back_s ? p_.pob : lerp(o.dropoff_location, p_.pob, 0.5);
        }
    }
    return last_dropoff;
}

std::vector<RideOrder> Synthesizer::run()
{
    const std::int64_t first_day = *parse_date(p_.first_date);
    const std::int64_t min_gap = kDefaultMaxShiftGap.count();
    std::vector<std::int64_t> free_from(p_.fleet_size, std::numeric_limits<std::int64_t>::min() / 2);
    std::vector<std::string> names;
    for (std::size_t v = 0; v < p_.fleet_size; ++v) {
        const std::string n = std::to_string(v + 1);
        names.push_back("V" + std::string(n.size() < 2 ? 2 - n.size() : 0, '0') + n);
    }

    for (int d = 0; d < p_.days; ++d) {
        const std::int64_t day = first_day + d;
        const int orders = p_.daily_orders[static_cast<std::size_t>(weekday_of_day_number(day))];
        if (orders == 0) {
            continue;
        }
        const int shifts =
            std::clamp(static_cast<int>(std::lround(orders / p_.mean_rides_per_shift)), 1, orders);
        std::vector<Pending> plan(static_cast<std::size_t>(shifts));
        const std::int64_t midnight = day * kSecondsPerDay - p_.utc_offset_s;
        for (auto& s : plan) {
            const auto hour = weighted_index(rng_, p_.shift_start_weights, hour_total_);
            s.start_s = midnight + static_cast<std::int64_t>(hour) * 3600 +
                        static_cast<std::int64_t>(uniform_index(rng_, 3600));
            s.rides = 1;
        }
        for (int r = shifts; r < orders; ++r) {
            ++plan[uniform_index(rng_, plan.size())].rides;
        }
        std::stable_sort(plan.begin(), plan.end(),
                         [](const Pending& a, const Pending& b) { return a.start_s < b.start_s; });
        for (const auto& s : plan) {
            // earliest-free vehicle, lowest index on ties
            const auto v = static_cast<std::size_t>(
                std::min_element(free_from.begin(), free_from.end()) - free_from.begin());
            const std::int64_t start = std::max(s.start_s, free_from[v] + min_gap + 60);
            free_from[v] = generate_shift(names[v], start, s.rides);
        }
    }
    return std::move(out_);
}

} // namespace

std::vector<DemandAnchor> resolve_anchors(const DemandParams& p, std::uint64_t seed)
{
    if (!p.anchors.empty()) {
        return p.anchors;
    }
    Rng rng(stream_seed(seed, "demand_anchors"));
    std::vector<DemandAnchor> out;
    const double limit = p.half_extent_m - 3.0 * p.anchor_sigma_m;
    for (int attempt = 0; out.size() < p.anchor_count && attempt < 100000; ++attempt) {
        const double e = standard_normal(rng) * p.anchor_spread_m;
        const double n = standard_normal(rng) * p.anchor_spread_m;
        if (std::abs(e) > limit || std::abs(n) > limit) {
            continue;
        }
        const LatLon x = offset_m(p.center, e, n);
        const bool clear = std::all_of(out.begin(), out.end(), [&](const DemandAnchor& a) {
            return haversine_m(a.pos, x) >= p.anchor_min_separation_m;
        });
        if (clear) {
            out.push_back({x, p.anchor_sigma_m, 1.0});
        }
    }
    return out;
}

std::vector<RideOrder> synthesize_demand(const DemandParams& params, std::uint64_t seed, const TravelModel& model)
{
    params.validate();
    Synthesizer s(params, seed, model);
    auto out = s.run();
    std::stable_sort(out.begin(), out.end(), [](const RideOrder& a, const RideOrder& b) {
        return a.order_time < b.order_time;
    });
    return out;
}

} // namespace ridesim
