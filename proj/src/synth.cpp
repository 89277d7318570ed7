#include "tdacp/synth.hpp"

#include <cmath>
#include <stdexcept>

namespace tdacp {

PointCloud sample_circles(std::size_t n_points,
                          const std::vector<std::array<double, 2>>& centers,
                          double radius, double noise_sd, std::uint64_t seed) {
    if (n_points < 1) throw std::invalid_argument("n_points must be >= 1");
    if (centers.empty()) throw std::invalid_argument("centers must be nonempty");
    if (!(radius > 0.0)) throw std::invalid_argument("radius must be > 0");
    if (noise_sd < 0.0) throw std::invalid_argument("noise_sd must be >= 0");

    Rng rng(seed);
    std::vector<double> coords;
    coords.reserve(2 * n_points);
    // Per point: circle index, angle, then the two noise normals.
    for (std::size_t i = 0; i < n_points; ++i) {
        const auto& c = centers[rng.uniform_index(centers.size())];
        const double angle = 2.0 * 3.14159265358979323846 * rng.uniform();
        const double nx = rng.normal();
        const double ny = rng.normal();
        coords.push_back(c[0] + radius * std::cos(angle) + noise_sd * nx);
        coords.push_back(c[1] + radius * std::sin(angle) + noise_sd * ny);
    }
    return PointCloud(std::move(coords), 2);
}

GridStreamGenerator::GridStreamGenerator(const GridStreamParams& params)
    : params_(params), rng_(params.seed) {
    if (params_.rows < 1 || params_.cols < 1) throw std::invalid_argument("empty input");
    if (params_.frames < 2 || params_.change_at == 0 || params_.change_at >= params_.frames)
        throw std::invalid_argument("change_at must satisfy 0 < change_at < frames");
    if (params_.noise_sd < 0.0) throw std::invalid_argument("noise_sd must be >= 0");
    if (params_.n_blobs < 1) throw std::invalid_argument("n_blobs must be >= 1");

    // Blob layout is drawn once, before any per-frame noise, so streams with
    // the same seed share both the layout and the noise sequence. Blobs are
    // broad relative to the grid: gentle slopes let pixel-noise minima
    // survive at every height, so the amplitude carries through to the birth
    // axis of the sublevel-set diagram instead of only to a few saddles.
    const double rows = static_cast<double>(params_.rows);
    const double cols = static_cast<double>(params_.cols);
    std::vector<std::array<double, 3>> blobs;  // (row, col, sd)
    for (std::size_t b = 0; b < params_.n_blobs; ++b) {
        const double cr = rows * (0.2 + 0.6 * rng_.uniform());
        const double cc = cols * (0.2 + 0.6 * rng_.uniform());
        const double sd = std::min(rows, cols) * (0.25 + 0.15 * rng_.uniform());
        blobs.push_back({cr, cc, sd});
    }

    blob_field_.assign(params_.rows * params_.cols, 0.0);
    for (std::size_t r = 0; r < params_.rows; ++r) {
        for (std::size_t c = 0; c < params_.cols; ++c) {
            double sum = 0.0;
            for (const auto& [br, bc, bsd] : blobs) {
                const double dr = static_cast<double>(r) - br;
                const double dc = static_cast<double>(c) - bc;
                sum += std::exp(-(dr * dr + dc * dc) / (2.0 * bsd * bsd));
            }
            blob_field_[r * params_.cols + c] = sum;
        }
    }
}

ScalarGrid GridStreamGenerator::next() {
    if (produced_ >= params_.frames) throw std::logic_error("stream exhausted");
    const double amp =
        produced_ < params_.change_at ? params_.pre_blob_amp : params_.post_blob_amp;
    ++produced_;

    std::vector<double> values(blob_field_.size());
    for (std::size_t p = 0; p < values.size(); ++p)
        values[p] = amp * blob_field_[p] + params_.noise_sd * rng_.normal();
    return ScalarGrid(params_.rows, params_.cols, std::move(values));
}

std::vector<ScalarGrid> gen_grid_stream(const GridStreamParams& params) {
    GridStreamGenerator gen(params);
    std::vector<ScalarGrid> frames;
    frames.reserve(params.frames);
    while (gen.frames_left() > 0) frames.push_back(gen.next());
    return frames;
}

}  // namespace tdacp
