#include "tdacp/types.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>
#include <stdexcept>

namespace tdacp {

PointCloud::PointCloud(std::vector<double> coords, std::size_t dim)
    : coords_(std::move(coords)), dim_(dim) {
    if (dim_ == 0) throw std::invalid_argument("point dimension must be >= 1");
    if (coords_.size() % dim_ != 0)
        throw std::invalid_argument("inconsistent dimensions: coordinate count not divisible by dim");
    for (double x : coords_)
        if (!std::isfinite(x)) throw std::invalid_argument("invalid coordinate");
}

PointCloud::PointCloud(const std::vector<std::vector<double>>& points) : dim_(0) {
    if (points.empty()) {
        dim_ = 1;
        return;
    }
    dim_ = points.front().size();
    if (dim_ == 0) throw std::invalid_argument("point dimension must be >= 1");
    coords_.reserve(points.size() * dim_);
    for (const auto& p : points) {
        if (p.size() != dim_) throw std::invalid_argument("inconsistent dimensions");
        for (double x : p) {
            if (!std::isfinite(x)) throw std::invalid_argument("invalid coordinate");
            coords_.push_back(x);
        }
    }
}

ScalarGrid::ScalarGrid(std::size_t rows, std::size_t cols, std::vector<double> values)
    : rows_(rows), cols_(cols), values_(std::move(values)) {
    if (values_.size() != rows_ * cols_)
        throw std::invalid_argument("grid values length must equal rows * cols");
    for (double x : values_)
        if (!std::isfinite(x)) throw std::invalid_argument("invalid coordinate");
}

Simplex Simplex::vertex(VertexId a, double value) {
    Simplex s;
    s.v = {a, 0, 0};
    s.nverts = 1;
    s.value = value;
    return s;
}

Simplex Simplex::edge(VertexId a, VertexId b, double value) {
    if (a >= b) throw std::invalid_argument("edge vertices must be strictly increasing");
    Simplex s;
    s.v = {a, b, 0};
    s.nverts = 2;
    s.value = value;
    return s;
}

Simplex Simplex::triangle(VertexId a, VertexId b, VertexId c, double value) {
    if (a >= b || b >= c)
        throw std::invalid_argument("triangle vertices must be strictly increasing");
    Simplex s;
    s.v = {a, b, c};
    s.nverts = 3;
    s.value = value;
    return s;
}

bool operator==(const Simplex& a, const Simplex& b) {
    return a.nverts == b.nverts && a.value == b.value &&
           std::equal(a.v.begin(), a.v.begin() + a.nverts, b.v.begin());
}

bool simplex_order_less(const Simplex& a, const Simplex& b) {
    if (a.value != b.value) return a.value < b.value;
    if (a.nverts != b.nverts) return a.nverts < b.nverts;
    return std::lexicographical_compare(a.v.begin(), a.v.begin() + a.nverts,
                                        b.v.begin(), b.v.begin() + b.nverts);
}

bool operator==(const PersistencePair& a, const PersistencePair& b) {
    return a.dim == b.dim && a.birth == b.birth && a.persistence == b.persistence;
}

namespace {

std::string describe(const Simplex& s) {
    std::ostringstream out;
    out << "{";
    for (int i = 0; i < static_cast<int>(s.nverts); ++i) {
        if (i) out << ",";
        out << s.v[i];
    }
    out << "} at " << s.value;
    return out.str();
}

}  // namespace

std::optional<std::string> validate(const FilteredComplex& complex) {
    const auto& simplices = complex.simplices;

    for (const auto& s : simplices) {
        if (s.nverts < 1 || s.nverts > 3)
            return "malformed simplex: vertex count " + std::to_string(s.nverts);
        for (int i = 1; i < static_cast<int>(s.nverts); ++i)
            if (s.v[i - 1] >= s.v[i])
                return "malformed simplex: vertices not strictly increasing in " + describe(s);
        if (!std::isfinite(s.value))
            return "malformed simplex: non-finite filtration value in " + describe(s);
    }

    for (std::size_t i = 1; i < simplices.size(); ++i) {
        if (simplices[i - 1] == simplices[i])
            return "duplicate simplex " + describe(simplices[i]);
        if (!simplex_order_less(simplices[i - 1], simplices[i]))
            return "sort order violated at position " + std::to_string(i);
    }

    // Faces of each simplex must be present with a value no larger than the
    // simplex's own.
    std::map<std::vector<VertexId>, double> value_of;
    for (const auto& s : simplices) {
        auto [it, inserted] =
            value_of.emplace(std::vector<VertexId>(s.v.begin(), s.v.begin() + s.nverts), s.value);
        if (!inserted) return "duplicate simplex " + describe(s);
    }

    auto check_face = [&](const Simplex& s, std::vector<VertexId> face) -> std::optional<std::string> {
        auto it = value_of.find(face);
        if (it == value_of.end())
            return "face closure violated: missing face of " + describe(s);
        if (it->second > s.value)
            return "monotonicity violated: face of " + describe(s) +
                   " has larger value " + std::to_string(it->second);
        return std::nullopt;
    };

    for (const auto& s : simplices) {
        if (s.nverts == 2) {
            for (int drop = 0; drop < 2; ++drop)
                if (auto err = check_face(s, {s.v[1 - drop]})) return err;
        } else if (s.nverts == 3) {
            const std::array<std::vector<VertexId>, 3> faces = {
                std::vector<VertexId>{s.v[0], s.v[1]},
                std::vector<VertexId>{s.v[0], s.v[2]},
                std::vector<VertexId>{s.v[1], s.v[2]}};
            for (const auto& f : faces)
                if (auto err = check_face(s, f)) return err;
        }
    }

    return std::nullopt;
}

}  // namespace tdacp
