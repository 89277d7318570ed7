#include "tdacp/detect.hpp"

#include "tdacp/rng.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace tdacp {

double chi_statistic(const EmpiricalDistribution& omega,
                     const EmpiricalDistribution& omega2,
                     const EmpiricalDistribution& xi,
                     const EmpiricalDistribution& xi2,
                     const std::vector<double>& sigma) {
    const std::size_t m = sigma.size();
    if (omega.size() != m || omega2.size() != m || xi.size() != m || xi2.size() != m)
        throw std::invalid_argument("dimension mismatch");
    double chi = 0.0;
    for (std::size_t i = 0; i < m; ++i)
        chi += sigma[i] * (omega.mass[i] - xi.mass[i]) * (omega2.mass[i] - xi2.mass[i]);
    return chi;
}

namespace {

void check_config(const DetectorConfig& cfg) {
    if (cfg.window < 1) throw std::invalid_argument("window must be >= 1");
    if (cfg.lookback && *cfg.lookback < 4 * cfg.window)
        throw std::invalid_argument("lookback must be >= 4 * window");
    if (std::isnan(cfg.threshold) || cfg.threshold < 0.0)
        throw std::invalid_argument("threshold must be >= 0");
    if (cfg.sigma.empty()) throw std::invalid_argument("sigma must be nonempty");
    for (double s : cfg.sigma)
        if (!(s >= 0.0) || !std::isfinite(s))
            throw std::invalid_argument("sigma weights must be finite and >= 0");
}

// Summary of frames [first, first + w) of `history`, where history.front()
// carries frame index `oldest_t`. Frames are accumulated oldest to newest so
// a from-scratch recomputation reproduces the value bit for bit.
EmpiricalDistribution interval_summary(const std::deque<EmpiricalDistribution>& history,
                                       std::int64_t oldest_t, std::int64_t first,
                                       std::size_t w, bool pool_raw_mass) {
    const std::size_t m = history.front().size();
    EmpiricalDistribution out;
    out.mass.assign(m, 0.0);
    if (pool_raw_mass) {
        double total = 0.0;
        for (std::size_t i = 0; i < w; ++i) {
            const auto& d = history[static_cast<std::size_t>(first - oldest_t) + i];
            for (std::size_t j = 0; j < m; ++j)
                out.mass[j] += d.mass[j] * d.total_persistence;
            total += d.total_persistence;
        }
        if (total > 0.0) {
            for (auto& x : out.mass) x /= total;
            out.total_persistence = total;
        } else {
            std::fill(out.mass.begin(), out.mass.end(), 1.0 / static_cast<double>(m));
            out.total_persistence = 0.0;
        }
    } else {
        for (std::size_t i = 0; i < w; ++i) {
            const auto& d = history[static_cast<std::size_t>(first - oldest_t) + i];
            for (std::size_t j = 0; j < m; ++j) out.mass[j] += d.mass[j];
        }
        for (auto& x : out.mass) x /= static_cast<double>(w);
    }
    return out;
}

}  // namespace

Detector::Detector(DetectorConfig cfg) : cfg_(std::move(cfg)) { check_config(cfg_); }

StepResult Detector::step(const EmpiricalDistribution& dist) {
    if (dist.size() != cfg_.sigma.size()) throw std::invalid_argument("dimension mismatch");

    const std::int64_t t = next_t_++;
    history_.push_back(dist);
    if (cfg_.lookback && history_.size() > *cfg_.lookback) history_.pop_front();

    const auto w = static_cast<std::int64_t>(cfg_.window);
    const std::int64_t oldest_t = t + 1 - static_cast<std::int64_t>(history_.size());

    // Admissible candidates: full four-window layout within the lookback.
    std::int64_t k_lo = 2 * w;
    if (cfg_.lookback)
        k_lo = std::max(k_lo, t - static_cast<std::int64_t>(*cfg_.lookback) + 2 * w);
    const std::int64_t k_hi = t - 2 * w;

    StepResult result;
    result.t = t;
    for (std::int64_t k = k_lo; k <= k_hi; ++k) {
        const auto omega = interval_summary(history_, oldest_t, k - 2 * w + 1, cfg_.window,
                                            cfg_.pool_raw_mass);
        const auto omega2 =
            interval_summary(history_, oldest_t, k - w + 1, cfg_.window, cfg_.pool_raw_mass);
        const auto xi =
            interval_summary(history_, oldest_t, k + 1, cfg_.window, cfg_.pool_raw_mass);
        const auto xi2 =
            interval_summary(history_, oldest_t, k + w + 1, cfg_.window, cfg_.pool_raw_mass);
        const double chi = chi_statistic(omega, omega2, xi, xi2, cfg_.sigma);
        if (!result.chi_max || chi > *result.chi_max) {
            result.chi_max = chi;
            result.k_hat = k;
        }
    }

    result.alarm = result.chi_max && *result.chi_max >= cfg_.threshold;
    if (result.alarm && !alarmed_at_) alarmed_at_ = t;

    last_chi_max_ = result.chi_max;
    last_k_hat_ = result.k_hat;
    return result;
}

double calibrate_threshold(const std::vector<EmpiricalDistribution>& pre_change_dists,
                           const DetectorConfig& cfg_wo_threshold,
                           double target_false_alarm_prob, std::size_t horizon,
                           std::size_t replicates, std::uint64_t seed) {
    DetectorConfig cfg = cfg_wo_threshold;
    cfg.threshold = std::numeric_limits<double>::infinity();
    check_config(cfg);

    const double alpha = target_false_alarm_prob;
    if (!(alpha > 0.0) || !(alpha <= 1.0))
        throw std::invalid_argument("false alarm probability must be in (0, 1]");
    if (replicates < 1) throw std::invalid_argument("replicates must be >= 1");
    if (pre_change_dists.size() < 4 * cfg.window)
        throw std::invalid_argument("training prefix too short");
    if (horizon <= 4 * cfg.window) throw std::invalid_argument("horizon too short");

    const std::size_t n = pre_change_dists.size();
    const std::size_t block = 2 * cfg.window;
    Rng rng(seed);

    std::vector<double> maxima;
    maxima.reserve(replicates);
    for (std::size_t rep = 0; rep < replicates; ++rep) {
        Detector det(cfg);
        double run_max = -std::numeric_limits<double>::infinity();
        std::size_t produced = 0;
        while (produced < horizon) {
            const std::size_t start = rng.uniform_index(n);
            for (std::size_t i = 0; i < block && produced < horizon; ++i, ++produced) {
                const auto res = det.step(pre_change_dists[(start + i) % n]);
                if (res.chi_max) run_max = std::max(run_max, *res.chi_max);
            }
        }
        maxima.push_back(run_max);
    }

    std::sort(maxima.begin(), maxima.end());
    auto rank = static_cast<std::size_t>(
        std::ceil((1.0 - alpha) * static_cast<double>(replicates)));
    rank = std::clamp<std::size_t>(rank, 1, replicates);
    return maxima[rank - 1];
}

}  // namespace tdacp
