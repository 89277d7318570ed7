#include "tdacp/synth.hpp"

#include "tdacp/detect.hpp"
#include "tdacp/histogram.hpp"
#include "tdacp/lower_star.hpp"
#include "tdacp/persistence.hpp"
#include "tdacp/rips.hpp"

#include <doctest.h>

#include <cmath>
#include <stdexcept>
#include <vector>

using namespace tdacp;

TEST_CASE("noiseless circle points sit at the exact radius") {
    const auto cloud = sample_circles(50, {{0.0, 0.0}}, 1.0, 0.0, 12);
    REQUIRE(cloud.size() == 50);
    for (std::size_t i = 0; i < cloud.size(); ++i) {
        const double norm = std::hypot(cloud.point(i)[0], cloud.point(i)[1]);
        CHECK(std::abs(norm - 1.0) <= 1e-12);
    }
}

TEST_CASE("same seed, same cloud; different seed, different cloud") {
    const auto a = sample_circles(30, {{1.0, 2.0}}, 0.5, 0.1, 7);
    const auto b = sample_circles(30, {{1.0, 2.0}}, 0.5, 0.1, 7);
    CHECK(a.coords() == b.coords());
    const auto c = sample_circles(30, {{1.0, 2.0}}, 0.5, 0.1, 8);
    CHECK(a.coords() != c.coords());
}

TEST_CASE("circle sampling validates its arguments") {
    CHECK_THROWS_AS(sample_circles(10, {}, 1.0, 0.0, 0), std::invalid_argument);
    CHECK_THROWS_AS(sample_circles(0, {{0.0, 0.0}}, 1.0, 0.0, 0), std::invalid_argument);
    CHECK_THROWS_AS(sample_circles(10, {{0.0, 0.0}}, 0.0, 0.0, 0), std::invalid_argument);
    CHECK_THROWS_AS(sample_circles(10, {{0.0, 0.0}}, 1.0, -0.1, 0), std::invalid_argument);
}

TEST_CASE("points land near one of the requested circles") {
    const std::vector<std::array<double, 2>> centers{{0.0, 0.0}, {10.0, 0.0}};
    const auto cloud = sample_circles(80, centers, 2.0, 0.0, 3);
    bool saw_first = false, saw_second = false;
    for (std::size_t i = 0; i < cloud.size(); ++i) {
        const double x = cloud.point(i)[0], y = cloud.point(i)[1];
        const double d0 = std::abs(std::hypot(x, y) - 2.0);
        const double d1 = std::abs(std::hypot(x - 10.0, y) - 2.0);
        CHECK(std::min(d0, d1) <= 1e-12);
        saw_first |= d0 <= 1e-12;
        saw_second |= d1 <= 1e-12;
    }
    CHECK(saw_first);
    CHECK(saw_second);
}

TEST_CASE("dominant loop of a dense noiseless circle") {
    // Pinned regression: the single prominent H1 feature of 60 points on the
    // unit circle. Birth is the largest gap between angular neighbors; the
    // loop dies near the inscribed-triangle scale sqrt(3).
    const auto cloud = sample_circles(60, {{0.0, 0.0}}, 1.0, 0.0, 42);
    RipsConfig cfg;
    cfg.eps_max = 2.0;
    const auto diagram = compute_persistence(build_rips(cloud, cfg));
    std::vector<PersistencePair> loops;
    for (const auto& p : diagram.finite)
        if (p.dim == 1) loops.push_back(p);
    REQUIRE(loops.size() == 1);
    CHECK(loops[0].persistence > 0.5);
    CHECK(loops[0].birth == 0.38325552530568785);
    CHECK(loops[0].persistence == 1.3515947377110078);
}

TEST_CASE("null grid stream: equal amplitudes and zero noise give identical frames") {
    GridStreamParams p;
    p.rows = 8;
    p.cols = 8;
    p.frames = 6;
    p.change_at = 3;
    p.pre_blob_amp = 1.0;
    p.post_blob_amp = 1.0;
    p.noise_sd = 0.0;
    p.seed = 5;
    const auto stream = gen_grid_stream(p);
    REQUIRE(stream.size() == 6);
    for (std::size_t t = 1; t < stream.size(); ++t)
        CHECK(stream[t].values() == stream[0].values());
}

TEST_CASE("noiseless frames are bounded by the blob superposition") {
    GridStreamParams p;
    p.rows = 10;
    p.cols = 10;
    p.frames = 4;
    p.change_at = 2;
    p.pre_blob_amp = 1.0;
    p.post_blob_amp = 1.0;
    p.noise_sd = 0.0;
    p.n_blobs = 3;
    p.seed = 9;
    for (const auto& frame : gen_grid_stream(p))
        for (double v : frame.values()) {
            CHECK(v >= 0.0);
            CHECK(v <= 3.0);
        }
}

TEST_CASE("pre-change frames are unaffected by the post-change amplitude") {
    GridStreamParams control;
    control.rows = 6;
    control.cols = 6;
    control.frames = 10;
    control.change_at = 5;
    control.post_blob_amp = 1.0;  // no change
    control.seed = 31;
    GridStreamParams change = control;
    change.post_blob_amp = 2.0;

    const auto a = gen_grid_stream(control);
    const auto b = gen_grid_stream(change);
    for (std::size_t t = 0; t < 5; ++t) CHECK(a[t].values() == b[t].values());
    // The first post-change frame differs.
    CHECK(a[5].values() != b[5].values());
}

TEST_CASE("grid stream is deterministic in the seed") {
    GridStreamParams p;
    p.rows = 5;
    p.cols = 7;
    p.frames = 4;
    p.change_at = 2;
    p.seed = 77;
    const auto a = gen_grid_stream(p);
    const auto b = gen_grid_stream(p);
    REQUIRE(a.size() == b.size());
    for (std::size_t t = 0; t < a.size(); ++t) CHECK(a[t].values() == b[t].values());
}

TEST_CASE("invalid change points are rejected") {
    GridStreamParams p;
    p.frames = 10;
    p.change_at = 0;
    CHECK_THROWS_AS(gen_grid_stream(p), std::invalid_argument);
    p.change_at = 10;
    CHECK_THROWS_AS(gen_grid_stream(p), std::invalid_argument);
    p.change_at = 11;
    CHECK_THROWS_AS(gen_grid_stream(p), std::invalid_argument);
}

TEST_CASE("the generator refuses to run past the stream end") {
    GridStreamParams p;
    p.rows = 3;
    p.cols = 3;
    p.frames = 2;
    p.change_at = 1;
    GridStreamGenerator gen(p);
    CHECK(gen.frames_left() == 2);
    gen.next();
    gen.next();
    CHECK(gen.frames_left() == 0);
    CHECK_THROWS_AS(gen.next(), std::logic_error);
}

TEST_CASE("default grid scenario: the detector alarms just after the change") {
    GridStreamParams params;
    params.seed = 0;
    const auto frames = gen_grid_stream(params);

    ReductionOptions opts;
    opts.dim1 = false;
    std::vector<PersistenceDiagram> diagrams;
    diagrams.reserve(frames.size());
    for (std::size_t t = 0; t < frames.size(); ++t) {
        auto d = compute_persistence(build_lower_star(frames[t]), opts);
        d.frame_index = static_cast<std::int64_t>(t);
        diagrams.push_back(std::move(d));
    }

    const std::vector<PersistenceDiagram> train(diagrams.begin(), diagrams.begin() + 40);
    const HistogramModel model = train_breakpoints(train, 10, 0);
    std::vector<EmpiricalDistribution> dists;
    dists.reserve(diagrams.size());
    for (const auto& d : diagrams) dists.push_back(bin_diagram(d, model));

    DetectorConfig cfg;
    cfg.window = 5;
    cfg.lookback = 40;
    cfg.sigma = model.sigma;
    const std::vector<EmpiricalDistribution> pre(dists.begin(), dists.begin() + 40);
    cfg.threshold = calibrate_threshold(pre, cfg, 0.05, 120, 200, 0);

    Detector det(cfg);
    for (const auto& dist : dists) det.step(dist);
    REQUIRE(det.alarmed_at().has_value());
    CHECK(*det.alarmed_at() == 65);
}
