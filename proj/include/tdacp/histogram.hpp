#pragma once

#include "tdacp/types.hpp"

#include <vector>

namespace tdacp {

// Fixed-breakpoint histogram over the birth axis, with per-bin persistence as
// mass. Breakpoints are trained once on pre-change diagrams and then frozen;
// bins are left-closed: (-inf, b1), [b1, b2), ..., [b_{M-1}, +inf).
struct HistogramModel {
    std::size_t bins = 0;                       // M
    std::vector<double> interior_breakpoints;   // M - 1 strictly increasing values
    std::vector<double> sigma;                  // M nonnegative weights
    int trained_dim = 0;
    std::size_t training_frames = 0;

    // Bin index of a birth value under the left-closed convention.
    std::size_t bin_of(double birth) const;
};

// Normalized per-bin persistence mass of one diagram. A diagram with no
// finite mass in the trained dimension maps to the uniform vector, with
// total_persistence recording 0.
struct EmpiricalDistribution {
    std::vector<double> mass;
    double total_persistence = 1.0;

    std::size_t size() const { return mass.size(); }
};

// Persistence-weighted birth quantiles of the pooled training diagrams:
// breakpoint m is the smallest pooled birth value whose mass strictly below
// it reaches m/M of the total, so the quantile atom itself lands in the lower
// bin. Degenerate pools (too few distinct births) advance through the
// remaining distinct values and then by ulp steps to keep the breakpoints
// strictly increasing. sigma defaults to all ones.
HistogramModel train_breakpoints(const std::vector<PersistenceDiagram>& training_diagrams,
                                 std::size_t bins, int dim);

// Inverse per-bin sample variance across the given distributions, with the
// variance floored at `floor` before inverting. Requires at least 8 frames.
std::vector<double> sigma_inverse_variance(const std::vector<EmpiricalDistribution>& dists,
                                           double floor = 1e-6);

EmpiricalDistribution bin_diagram(const PersistenceDiagram& diagram,
                                  const HistogramModel& model);

}  // namespace tdacp
