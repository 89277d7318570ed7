#include "tdacp/lower_star.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

namespace tdacp {

FilteredComplex build_lower_star(const ScalarGrid& grid) {
    const std::size_t rows = grid.rows(), cols = grid.cols();
    if (rows == 0 || cols == 0) throw std::invalid_argument("empty input");

    const auto& f = grid.values();
    auto id = [cols](std::size_t r, std::size_t c) {
        return static_cast<VertexId>(r * cols + c);
    };

    FilteredComplex fc;
    const std::size_t n_edges =
        rows * (cols - 1) + cols * (rows - 1) + (rows - 1) * (cols - 1);
    const std::size_t n_tris = 2 * (rows - 1) * (cols - 1);
    fc.simplices.reserve(rows * cols + n_edges + n_tris);

    for (std::size_t p = 0; p < rows * cols; ++p)
        fc.simplices.push_back(Simplex::vertex(static_cast<VertexId>(p), f[p]));

    // Per pixel: right, down, then diagonal edge; this enumeration is already
    // lexicographic in the vertex pairs.
    for (std::size_t r = 0; r < rows; ++r) {
        for (std::size_t c = 0; c < cols; ++c) {
            const VertexId u = id(r, c);
            const double fu = f[u];
            if (c + 1 < cols)
                fc.simplices.push_back(Simplex::edge(u, u + 1, std::max(fu, f[u + 1])));
            if (r + 1 < rows)
                fc.simplices.push_back(
                    Simplex::edge(u, id(r + 1, c), std::max(fu, f[id(r + 1, c)])));
            if (r + 1 < rows && c + 1 < cols)
                fc.simplices.push_back(
                    Simplex::edge(u, id(r + 1, c + 1), std::max(fu, f[id(r + 1, c + 1)])));
        }
    }

    // Two triangles per unit square, split along the fixed diagonal.
    for (std::size_t r = 0; r + 1 < rows; ++r) {
        for (std::size_t c = 0; c + 1 < cols; ++c) {
            const VertexId tl = id(r, c), tr = id(r, c + 1);
            const VertexId bl = id(r + 1, c), br = id(r + 1, c + 1);
            fc.simplices.push_back(
                Simplex::triangle(tl, tr, br, std::max({f[tl], f[tr], f[br]})));
            fc.simplices.push_back(
                Simplex::triangle(tl, bl, br, std::max({f[tl], f[bl], f[br]})));
        }
    }

    // Generation order is (dimension, lexicographic vertices); index-stable
    // sort on value gives the filtration order.
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

}  // namespace tdacp
