#include "ridesim/grid_network.hpp"

#include "ridesim/error.hpp"

namespace ridesim {

RoadGraph make_grid_network(const GridSpec& spec)
{
    if (spec.rows < 1 || spec.cols < 1 || !(spec.spacing_m > 0.0)) {
        throw ConfigError("grid needs positive dimensions and spacing");
    }
    const double half_w = 0.5 * spec.spacing_m * (spec.cols - 1);
    const double half_h = 0.5 * spec.spacing_m * (spec.rows - 1);
    const auto id_of = [&](int r, int c) { return static_cast<std::int64_t>(r) * spec.cols + c + 1; };

    std::vector<NodeSpec> nodes;
    std::vector<LatLon> pos;
    for (int r = 0; r < spec.rows; ++r) {
        for (int c = 0; c < spec.cols; ++c) {
            const LatLon p = offset_m(spec.center, c * spec.spacing_m - half_w, r * spec.spacing_m - half_h);
            nodes.push_back({id_of(r, c), p});
            pos.push_back(p);
        }
    }
    const auto arterial = [&](int line) { return spec.arterial_every > 0 && line % spec.arterial_every == 0; };

    std::vector<EdgeSpec> edges;
    std::int64_t next_id = 1;
    const auto add_pair = [&](int r1, int c1, int r2, int c2, bool fast) {
        const double speed = fast ? spec.arterial_speed_mps : spec.local_speed_mps;
        const auto a = id_of(r1, c1);
        const auto b = id_of(r2, c2);
        const double len = haversine_m(pos[static_cast<std::size_t>(a - 1)], pos[static_cast<std::size_t>(b - 1)]);
        edges.push_back({next_id++, a, b, len, speed});
        edges.push_back({next_id++, b, a, len, speed});
    };
    for (int r = 0; r < spec.rows; ++r) {
        for (int c = 0; c < spec.cols; ++c) {
            if (c + 1 < spec.cols) {
                add_pair(r, c, r, c + 1, arterial(r));
            }
            if (r + 1 < spec.rows) {
                add_pair(r, c, r + 1, c, arterial(c));
            }
        }
    }
    return RoadGraph(std::move(nodes), std::move(edges));
}

} // namespace ridesim
