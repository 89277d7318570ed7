#pragma once

#include "tdacp/histogram.hpp"

#include <cstdint>
#include <deque>
#include <optional>
#include <vector>

namespace tdacp {

// Weighted bilinear divergence between two pairs of distributions:
//   sum_m sigma_m * (omega_m - xi_m) * (omega2_m - xi2_m).
// May be negative.
double chi_statistic(const EmpiricalDistribution& omega,
                     const EmpiricalDistribution& omega2,
                     const EmpiricalDistribution& xi,
                     const EmpiricalDistribution& xi2,
                     const std::vector<double>& sigma);

struct DetectorConfig {
    std::size_t window = 1;                  // w: length of each of the four intervals
    std::optional<std::size_t> lookback;     // L: candidate age cap; nullopt = unbounded
    double threshold = 0.0;                  // alarm when chi_max >= threshold
    std::vector<double> sigma;               // per-bin weights, length M
    // When set, interval summaries pool raw persistence mass across the
    // interval's frames before normalizing instead of averaging the frames'
    // normalized distributions.
    bool pool_raw_mass = false;
};

struct StepResult {
    std::int64_t t = -1;
    std::optional<double> chi_max;           // nullopt: no admissible candidate yet
    std::optional<std::int64_t> k_hat;
    bool alarm = false;
};

// Online scan over a stream of per-frame distributions. For each candidate
// change time k with a full four-window layout
//   G1a = (k-2w, k-w], G1b = (k-w, k], G2a = (k, k+w], G2b = (k+w, k+2w]
// inside the lookback (k+2w <= t and k-2w >= max(0, t-L)), the statistic is
// chi_statistic(mean G1a, mean G1b, mean G2a, mean G2b, sigma); step reports
// the max over k and the earliest k attaining it. The first crossing of the
// threshold freezes alarmed_at; the detector keeps reporting afterwards.
class Detector {
public:
    explicit Detector(DetectorConfig cfg);

    StepResult step(const EmpiricalDistribution& dist);

    std::int64_t frames_seen() const { return next_t_; }
    std::optional<std::int64_t> alarmed_at() const { return alarmed_at_; }
    const DetectorConfig& config() const { return cfg_; }
    std::optional<double> last_chi_max() const { return last_chi_max_; }
    std::optional<std::int64_t> last_k_hat() const { return last_k_hat_; }

private:
    DetectorConfig cfg_;
    std::deque<EmpiricalDistribution> history_;  // last L frames (all, if unbounded)
    std::int64_t next_t_ = 0;                    // index the next frame will get
    std::optional<std::int64_t> alarmed_at_;
    std::optional<double> last_chi_max_;
    std::optional<std::int64_t> last_k_hat_;
};

// Threshold calibration by circular block bootstrap (block length 2w) from a
// pre-change sample: simulates `replicates` null streams of `horizon` frames,
// records each stream's largest chi_max, and returns the ceil((1-alpha)*R)-th
// order statistic (at least the smallest recorded max).
double calibrate_threshold(const std::vector<EmpiricalDistribution>& pre_change_dists,
                           const DetectorConfig& cfg_wo_threshold,
                           double target_false_alarm_prob, std::size_t horizon,
                           std::size_t replicates, std::uint64_t seed);

}  // namespace tdacp
