#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace tdacp {

using VertexId = std::uint32_t;

// Point cloud in R^d, d >= 1. Coordinates are stored flat, row-major.
// Construction rejects non-finite coordinates and mixed dimensions; instances
// are immutable afterwards.
class PointCloud {
public:
    PointCloud(std::vector<double> coords, std::size_t dim);
    explicit PointCloud(const std::vector<std::vector<double>>& points);

    std::size_t size() const { return dim_ == 0 ? 0 : coords_.size() / dim_; }
    std::size_t dim() const { return dim_; }
    std::span<const double> point(std::size_t i) const {
        return {coords_.data() + i * dim_, dim_};
    }
    const std::vector<double>& coords() const { return coords_; }

private:
    std::vector<double> coords_;
    std::size_t dim_;
};

// Scalar field sampled on a rows x cols grid, row-major. All values finite.
class ScalarGrid {
public:
    ScalarGrid(std::size_t rows, std::size_t cols, std::vector<double> values);

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    double at(std::size_t r, std::size_t c) const { return values_[r * cols_ + c]; }
    const std::vector<double>& values() const { return values_; }

private:
    std::size_t rows_, cols_;
    std::vector<double> values_;
};

// Vertex, edge, or triangle with its filtration value. Vertices are strictly
// increasing; only the first `nverts` entries of `v` are meaningful.
struct Simplex {
    std::array<VertexId, 3> v{0, 0, 0};
    std::uint8_t nverts = 0;
    double value = 0.0;

    int dim() const { return static_cast<int>(nverts) - 1; }

    static Simplex vertex(VertexId a, double value);
    static Simplex edge(VertexId a, VertexId b, double value);
    static Simplex triangle(VertexId a, VertexId b, VertexId c, double value);
};

bool operator==(const Simplex& a, const Simplex& b);

// Total order realizing the filtration: value, then dimension, then
// lexicographic vertices. Any face-consistent total order gives a valid
// persistence computation; fixing this one makes outputs reproducible.
bool simplex_order_less(const Simplex& a, const Simplex& b);

// One ordered simplex list realizing a nested family of complexes: every
// prefix under the sort order is itself a complex.
struct FilteredComplex {
    std::vector<Simplex> simplices;

    std::size_t size() const { return simplices.size(); }
    bool empty() const { return simplices.empty(); }
};

// Diagnostic check of the FilteredComplex invariants. Returns the first
// violation found (sort order, then face closure, then monotonicity) or
// nullopt when the complex is valid.
std::optional<std::string> validate(const FilteredComplex& complex);

// Feature in tilted coordinates: (birth, death - birth).
struct PersistencePair {
    int dim = 0;
    double birth = 0.0;
    double persistence = 0.0;
};

bool operator==(const PersistencePair& a, const PersistencePair& b);

struct PersistenceDiagram {
    std::int64_t frame_index = 0;
    std::vector<PersistencePair> finite;
    // Birth values of never-dying features, per homology dimension.
    std::array<std::vector<double>, 2> infinite;

    const std::vector<double>& infinite_births(int dim) const { return infinite[dim]; }
};

}  // namespace tdacp
