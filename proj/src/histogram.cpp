#include "tdacp/histogram.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace tdacp {

std::size_t HistogramModel::bin_of(double birth) const {
    const auto it = std::upper_bound(interior_breakpoints.begin(),
                                     interior_breakpoints.end(), birth);
    return static_cast<std::size_t>(it - interior_breakpoints.begin());
}

HistogramModel train_breakpoints(const std::vector<PersistenceDiagram>& training_diagrams,
                                 std::size_t bins, int dim) {
    if (bins < 2) throw std::invalid_argument("invalid bin count");
    if (dim != 0 && dim != 1) throw std::invalid_argument("dim must be 0 or 1");

    std::vector<std::pair<double, double>> pool;  // (birth, persistence)
    for (const auto& d : training_diagrams)
        for (const auto& p : d.finite)
            if (p.dim == dim && p.persistence > 0.0)
                pool.emplace_back(p.birth, p.persistence);
    if (pool.empty()) throw std::invalid_argument("no training mass");

    std::sort(pool.begin(), pool.end());

    // Aggregate equal births into atoms.
    std::vector<double> births, masses;
    for (const auto& [b, m] : pool) {
        if (!births.empty() && births.back() == b) {
            masses.back() += m;
        } else {
            births.push_back(b);
            masses.push_back(m);
        }
    }

    double total = 0.0;
    for (double m : masses) total += m;

    HistogramModel model;
    model.bins = bins;
    model.trained_dim = dim;
    model.training_frames = training_diagrams.size();
    model.sigma.assign(bins, 1.0);
    model.interior_breakpoints.reserve(bins - 1);

    // Exclusive prefix mass at each distinct birth.
    std::vector<double> below(births.size(), 0.0);
    for (std::size_t i = 1; i < births.size(); ++i)
        below[i] = below[i - 1] + masses[i - 1];

    std::size_t cursor = 0;
    for (std::size_t m = 1; m < bins; ++m) {
        const double target = total * static_cast<double>(m) / static_cast<double>(bins);
        while (cursor < births.size() && below[cursor] < target) ++cursor;
        double bp = cursor < births.size() ? births[cursor] : births.back();
        if (!model.interior_breakpoints.empty()) {
            const double prev = model.interior_breakpoints.back();
            if (bp <= prev) {
                // Degenerate pool: take the next distinct birth above prev,
                // or continue by ulp steps past the top atom.
                const auto it = std::upper_bound(births.begin(), births.end(), prev);
                bp = it != births.end()
                         ? *it
                         : std::nextafter(prev, std::numeric_limits<double>::infinity());
            }
        }
        model.interior_breakpoints.push_back(bp);
    }
    return model;
}

std::vector<double> sigma_inverse_variance(const std::vector<EmpiricalDistribution>& dists,
                                           double floor) {
    if (dists.size() < 8)
        throw std::invalid_argument("inverse-variance sigma requires at least 8 frames");
    const std::size_t m = dists.front().size();
    for (const auto& d : dists)
        if (d.size() != m) throw std::invalid_argument("dimension mismatch");

    std::vector<double> mean(m, 0.0), var(m, 0.0);
    for (const auto& d : dists)
        for (std::size_t i = 0; i < m; ++i) mean[i] += d.mass[i];
    for (auto& x : mean) x /= static_cast<double>(dists.size());
    for (const auto& d : dists)
        for (std::size_t i = 0; i < m; ++i) {
            const double c = d.mass[i] - mean[i];
            var[i] += c * c;
        }
    std::vector<double> sigma(m);
    for (std::size_t i = 0; i < m; ++i) {
        const double v = var[i] / static_cast<double>(dists.size() - 1);
        sigma[i] = 1.0 / std::max(v, floor);
    }
    return sigma;
}

EmpiricalDistribution bin_diagram(const PersistenceDiagram& diagram,
                                  const HistogramModel& model) {
    if (model.bins < 2 || model.interior_breakpoints.size() != model.bins - 1)
        throw std::invalid_argument("model not trained");

    // Accumulate in a canonical order so the result is independent of the
    // order of pairs in the diagram, bit for bit.
    std::vector<std::array<double, 3>> entries;  // (bin, birth, persistence)
    for (const auto& p : diagram.finite) {
        if (p.dim != model.trained_dim) continue;
        entries.push_back({static_cast<double>(model.bin_of(p.birth)), p.birth,
                           p.persistence});
    }
    std::sort(entries.begin(), entries.end());

    EmpiricalDistribution out;
    out.mass.assign(model.bins, 0.0);
    double total = 0.0;
    for (const auto& e : entries) {
        out.mass[static_cast<std::size_t>(e[0])] += e[2];
        total += e[2];
    }
    if (total > 0.0) {
        for (auto& x : out.mass) x /= total;
        out.total_persistence = total;
    } else {
        const double uniform = 1.0 / static_cast<double>(model.bins);
        std::fill(out.mass.begin(), out.mass.end(), uniform);
        out.total_persistence = 0.0;
    }
    return out;
}

}  // namespace tdacp
