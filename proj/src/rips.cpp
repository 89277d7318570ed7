#include "tdacp/rips.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace tdacp {

namespace {

double euclidean(const PointCloud& cloud, std::size_t i, std::size_t j) {
    const auto a = cloud.point(i);
    const auto b = cloud.point(j);
    double sum = 0.0;
    for (std::size_t k = 0; k < a.size(); ++k) {
        const double d = a[k] - b[k];
        sum += d * d;
    }
    return std::sqrt(sum);
}

}  // namespace

FilteredComplex build_rips(const PointCloud& cloud, const RipsConfig& cfg) {
    if (cloud.size() == 0) throw std::invalid_argument("empty input");
    if (!(cfg.eps_max > 0.0)) throw std::invalid_argument("eps_max must be > 0");
    if (cfg.max_dim != 1 && cfg.max_dim != 2)
        throw std::invalid_argument("max_dim must be 1 or 2");

    const std::size_t n = cloud.size();

    FilteredComplex fc;
    fc.simplices.reserve(2 * n);
    for (std::size_t i = 0; i < n; ++i)
        fc.simplices.push_back(Simplex::vertex(static_cast<VertexId>(i), 0.0));

    // Neighbors above i together with the edge length; doubles as the edge
    // list and as the adjacency used for triangle enumeration.
    std::vector<std::vector<std::pair<VertexId, double>>> adj(n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            const double d = euclidean(cloud, i, j);
            if (d <= cfg.eps_max) {
                adj[i].emplace_back(static_cast<VertexId>(j), d);
                fc.simplices.push_back(
                    Simplex::edge(static_cast<VertexId>(i), static_cast<VertexId>(j), d));
            }
        }
    }

    if (cfg.max_dim == 2) {
        // Triangle {i,j,k} exists iff all three edges do; enumerate k in
        // adj[i] intersect adj[j] for each edge (i,j).
        for (std::size_t i = 0; i < n; ++i) {
            for (const auto& [j, dij] : adj[i]) {
                auto it_i = std::upper_bound(
                    adj[i].begin(), adj[i].end(), std::make_pair(j, 0.0),
                    [](const auto& a, const auto& b) { return a.first < b.first; });
                auto it_j = adj[j].begin();
                while (it_i != adj[i].end() && it_j != adj[j].end()) {
                    if (it_i->first < it_j->first) {
                        ++it_i;
                    } else if (it_j->first < it_i->first) {
                        ++it_j;
                    } else {
                        const double value = std::max({dij, it_i->second, it_j->second});
                        fc.simplices.push_back(Simplex::triangle(
                            static_cast<VertexId>(i), j, it_i->first, value));
                        ++it_i;
                        ++it_j;
                    }
                }
            }
        }
    }

    // Generation order is already (dimension, lexicographic vertices), so an
    // index-stable sort on value alone yields the full filtration order.
    std::vector<std::uint32_t> order(fc.simplices.size());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](std::uint32_t a, std::uint32_t b) {
        const double va = fc.simplices[a].value, vb = fc.simplices[b].value;
        if (va != vb) return va < vb;
        return a < b;
    });
    std::vector<Simplex> sorted;
    sorted.reserve(fc.simplices.size());
    for (std::uint32_t idx : order) sorted.push_back(fc.simplices[idx]);
    fc.simplices = std::move(sorted);
    return fc;
}

double cloud_diameter(const PointCloud& cloud) {
    double diameter = 0.0;
    for (std::size_t i = 0; i < cloud.size(); ++i)
        for (std::size_t j = i + 1; j < cloud.size(); ++j)
            diameter = std::max(diameter, euclidean(cloud, i, j));
    return diameter;
}

}  // namespace tdacp
