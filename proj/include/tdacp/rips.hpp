#pragma once

#include "tdacp/types.hpp"

namespace tdacp {

struct RipsConfig {
    double eps_max = 0.0;  // scale truncation, required > 0
    int max_dim = 2;       // 1 = graph only, 2 = with triangles
};

// Vietoris-Rips filtration of a Euclidean point cloud, truncated at
// cfg.eps_max. Vertices enter at 0, an edge at its length, a triangle at the
// largest of its three edge lengths.
FilteredComplex build_rips(const PointCloud& cloud, const RipsConfig& cfg);

// Largest pairwise distance; convenience for picking eps_max.
double cloud_diameter(const PointCloud& cloud);

}  // namespace tdacp
