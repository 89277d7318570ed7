#pragma once

#include "tdacp/rng.hpp"
#include "tdacp/types.hpp"

#include <cstdint>
#include <vector>

namespace tdacp {

// Points drawn uniformly on a union of circles, perturbed by isotropic
// Gaussian noise. Deterministic in the seed (see rng.hpp for the generator).
PointCloud sample_circles(std::size_t n_points,
                          const std::vector<std::array<double, 2>>& centers,
                          double radius, double noise_sd, std::uint64_t seed);

struct GridStreamParams {
    std::size_t rows = 32;
    std::size_t cols = 32;
    std::size_t frames = 120;       // T
    std::size_t change_at = 60;     // index of the first post-change frame, 0 < change_at < T
    double pre_blob_amp = 1.0;
    double post_blob_amp = 2.0;
    double noise_sd = 0.05;
    std::size_t n_blobs = 3;
    std::uint64_t seed = 0;
};

// Streaming source for the synthetic image scenario: a fixed layout of
// Gaussian blobs whose amplitude steps from pre_blob_amp to post_blob_amp at
// change_at, plus fresh pixel noise each frame. Frames must be consumed in
// order; next() yields frame 0, 1, ...
class GridStreamGenerator {
public:
    explicit GridStreamGenerator(const GridStreamParams& params);

    ScalarGrid next();
    std::size_t frames_left() const { return params_.frames - produced_; }

private:
    GridStreamParams params_;
    std::vector<double> blob_field_;  // unit-amplitude blob superposition
    Rng rng_;
    std::size_t produced_ = 0;
};

// Whole stream at once; convenience over GridStreamGenerator.
std::vector<ScalarGrid> gen_grid_stream(const GridStreamParams& params);

}  // namespace tdacp
