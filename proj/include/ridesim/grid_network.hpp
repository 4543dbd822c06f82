#pragma once

#include "ridesim/road_graph.hpp"

namespace ridesim {

/// Bidirectional Manhattan grid. Every `arterial_every`-th row and column is
/// an arterial with the faster speed. Node ids are row * cols + col + 1,
/// edge ids count up from 1.
struct GridSpec {
    int rows = 20;
    int cols = 20;
    double spacing_m = 750.0;
    LatLon center{52.5150, 13.3900};
    int arterial_every = 5;
    double arterial_speed_mps = 50.0 / 3.6;
    double local_speed_mps = 30.0 / 3.6;
};

/// rows*cols nodes and 4*rows*cols - 2*rows - 2*cols directed edges.
RoadGraph make_grid_network(const GridSpec& spec);

} // namespace ridesim
