#include "tdacp/persistence.hpp"

#include <algorithm>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <vector>

namespace tdacp {

namespace {

constexpr std::uint32_t kNone = std::numeric_limits<std::uint32_t>::max();

[[noreturn]] void invalid(const std::string& detail) {
    throw std::invalid_argument("invalid filtration: " + detail);
}

// Open-addressing table from a packed vertex pair to the edge's position in
// the sorted simplex list. Sized at build time; plain linear probing.
class EdgeIndex {
public:
    explicit EdgeIndex(std::size_t n_edges) {
        std::size_t cap = 16;
        while (cap < 2 * n_edges + 1) cap <<= 1;
        mask_ = cap - 1;
        keys_.assign(cap, kEmpty);
        vals_.resize(cap);
    }

    void insert(std::uint64_t key, std::uint32_t pos) {
        std::size_t slot = hash(key) & mask_;
        while (keys_[slot] != kEmpty) slot = (slot + 1) & mask_;
        keys_[slot] = key;
        vals_[slot] = pos;
    }

    std::uint32_t find(std::uint64_t key) const {
        std::size_t slot = hash(key) & mask_;
        while (keys_[slot] != kEmpty) {
            if (keys_[slot] == key) return vals_[slot];
            slot = (slot + 1) & mask_;
        }
        return kNone;
    }

private:
    static constexpr std::uint64_t kEmpty = std::numeric_limits<std::uint64_t>::max();

    static std::uint64_t hash(std::uint64_t x) {
        x ^= x >> 33;
        x *= 0xFF51AFD7ED558CCDULL;
        x ^= x >> 33;
        return x;
    }

    std::size_t mask_ = 0;
    std::vector<std::uint64_t> keys_;
    std::vector<std::uint32_t> vals_;
};

std::uint64_t pack(VertexId a, VertexId b) {
    return (static_cast<std::uint64_t>(a) << 32) | b;
}

// Union-find with the component's (birth value, birth vertex) kept at the
// root; the elder of two merged components survives.
class ComponentForest {
public:
    void ensure(VertexId v) {
        if (v >= parent_.size()) {
            const std::size_t old = parent_.size();
            parent_.resize(v + 1);
            for (std::size_t i = old; i <= v; ++i)
                parent_[i] = static_cast<std::uint32_t>(i);
            birth_value_.resize(v + 1, 0.0);
            birth_vertex_.resize(v + 1, 0);
            present_.resize(v + 1, false);
        }
    }

    void add_vertex(VertexId v, double value) {
        ensure(v);
        birth_value_[v] = value;
        birth_vertex_[v] = v;
        present_[v] = true;
    }

    bool present(VertexId v) const { return v < present_.size() && present_[v]; }

    std::uint32_t find(std::uint32_t x) {
        std::uint32_t root = x;
        while (parent_[root] != root) root = parent_[root];
        while (parent_[x] != root) {
            const std::uint32_t next = parent_[x];
            parent_[x] = root;
            x = next;
        }
        return root;
    }

    // Merges the two components; returns the (birth value, birth vertex) of
    // the one that dies. Caller guarantees ru != rv.
    std::pair<double, VertexId> merge(std::uint32_t ru, std::uint32_t rv) {
        const bool u_elder =
            birth_value_[ru] != birth_value_[rv]
                ? birth_value_[ru] < birth_value_[rv]
                : birth_vertex_[ru] < birth_vertex_[rv];
        const std::uint32_t survivor = u_elder ? ru : rv;
        const std::uint32_t dying = u_elder ? rv : ru;
        parent_[dying] = survivor;
        return {birth_value_[dying], birth_vertex_[dying]};
    }

    double birth_value(std::uint32_t root) const { return birth_value_[root]; }
    VertexId birth_vertex(std::uint32_t root) const { return birth_vertex_[root]; }
    std::size_t size() const { return parent_.size(); }
    bool is_root(std::uint32_t x) const { return parent_[x] == x; }

private:
    std::vector<std::uint32_t> parent_;
    std::vector<double> birth_value_;
    std::vector<VertexId> birth_vertex_;
    std::vector<bool> present_;
};

struct Scratch {
    ComponentForest forest;
    std::vector<PersistencePair> h0_pairs;           // includes zero persistence
    std::vector<double> h0_infinite;
    std::vector<std::uint8_t> edge_negative;         // indexed by edge rank
    std::vector<std::uint32_t> edge_positions;       // sorted position by edge rank
};

// Single pass over the sorted simplices: checks order/faces/monotonicity,
// pairs dimension 0 via the edge sweep and classifies every edge as negative
// (merges components) or positive (creates a cycle).
void sweep_edges(const FilteredComplex& complex, Scratch& s, EdgeIndex* edge_index) {
    const auto& simplices = complex.simplices;

    for (std::size_t i = 1; i < simplices.size(); ++i)
        if (!simplex_order_less(simplices[i - 1], simplices[i]))
            invalid("sort order violated at position " + std::to_string(i));

    std::size_t n_vertices = 0;
    for (std::size_t pos = 0; pos < simplices.size(); ++pos) {
        const Simplex& sx = simplices[pos];
        if (sx.nverts == 1) {
            if (s.forest.present(sx.v[0])) invalid("duplicate vertex");
            s.forest.add_vertex(sx.v[0], sx.value);
            ++n_vertices;
        } else if (sx.nverts == 2) {
            const VertexId u = sx.v[0], v = sx.v[1];
            if (u >= v) invalid("edge vertices not increasing");
            // Sort order guarantees both endpoints entered at a value no
            // larger than the edge's, so presence covers monotonicity too.
            if (!s.forest.present(u) || !s.forest.present(v))
                invalid("face closure violated by an edge");
            const std::uint32_t ru = s.forest.find(u), rv = s.forest.find(v);
            if (ru == rv) {
                s.edge_negative.push_back(0);
            } else {
                const auto [birth, birth_vertex] = s.forest.merge(ru, rv);
                (void)birth_vertex;
                s.h0_pairs.push_back({0, birth, sx.value - birth});
                s.edge_negative.push_back(1);
            }
            s.edge_positions.push_back(static_cast<std::uint32_t>(pos));
            if (edge_index) edge_index->insert(pack(u, v), static_cast<std::uint32_t>(pos));
        }
    }

    // One infinite birth per final component.
    for (std::uint32_t v = 0; v < s.forest.size(); ++v)
        if (s.forest.present(v) && s.forest.is_root(v))
            s.h0_infinite.push_back(s.forest.birth_value(v));
    (void)n_vertices;
}

// Z/2 column reduction of the triangle boundary matrix. Columns are sorted
// ascending lists of edge positions; the pivot is the back. Edges already
// paired by the edge sweep never become pivots (standard clearing argument),
// so only positive edges are claimed here.
void reduce_triangles(const FilteredComplex& complex, const EdgeIndex& edge_index,
                      std::vector<PersistencePair>& h1_pairs,
                      std::vector<std::uint8_t>& edge_tri_paired) {
    const auto& simplices = complex.simplices;

    std::vector<std::vector<std::uint32_t>> stored;
    std::vector<std::uint32_t> pivot_owner(simplices.size(), kNone);
    std::vector<std::uint32_t> col, merged;

    for (std::size_t pos = 0; pos < simplices.size(); ++pos) {
        const Simplex& sx = simplices[pos];
        if (sx.nverts != 3) continue;

        col.clear();
        const std::array<std::pair<VertexId, VertexId>, 3> faces = {
            std::make_pair(sx.v[0], sx.v[1]), std::make_pair(sx.v[0], sx.v[2]),
            std::make_pair(sx.v[1], sx.v[2])};
        for (const auto& [a, b] : faces) {
            if (a >= b) invalid("triangle vertices not increasing");
            const std::uint32_t epos = edge_index.find(pack(a, b));
            if (epos == kNone) invalid("face closure violated by a triangle");
            if (simplices[epos].value > sx.value)
                invalid("monotonicity violated by a triangle");
            col.push_back(epos);
        }
        std::sort(col.begin(), col.end());

        while (!col.empty()) {
            const std::uint32_t low = col.back();
            const std::uint32_t owner = pivot_owner[low];
            if (owner == kNone) {
                pivot_owner[low] = static_cast<std::uint32_t>(stored.size());
                const double birth = simplices[low].value;
                h1_pairs.push_back({1, birth, sx.value - birth});
                edge_tri_paired[low] = 1;
                stored.push_back(col);
                break;
            }
            // Symmetric difference with the owning column.
            const auto& other = stored[owner];
            merged.clear();
            std::size_t a = 0, b = 0;
            while (a < col.size() && b < other.size()) {
                if (col[a] < other[b]) merged.push_back(col[a++]);
                else if (other[b] < col[a]) merged.push_back(other[b++]);
                else { ++a; ++b; }
            }
            merged.insert(merged.end(), col.begin() + a, col.end());
            merged.insert(merged.end(), other.begin() + b, other.end());
            col.swap(merged);
        }
    }
}

void finalize(PersistenceDiagram& out, const ReductionOptions& opts,
              std::vector<PersistencePair>&& pairs) {
    for (auto& p : pairs)
        if (!opts.drop_zero_persistence || p.persistence > 0.0)
            out.finite.push_back(p);
    std::sort(out.finite.begin(), out.finite.end(), [](const auto& a, const auto& b) {
        if (a.dim != b.dim) return a.dim < b.dim;
        if (a.birth != b.birth) return a.birth < b.birth;
        return a.persistence < b.persistence;
    });
    for (auto& births : out.infinite) std::sort(births.begin(), births.end());
}

}  // namespace

PersistenceDiagram compute_persistence(const FilteredComplex& complex,
                                       const ReductionOptions& opts) {
    if (!opts.dim0 && !opts.dim1)
        throw std::invalid_argument("reduction dims must be nonempty");

    std::size_t n_edges = 0, n_tris = 0;
    for (const auto& sx : complex.simplices) {
        if (sx.nverts == 2) ++n_edges;
        else if (sx.nverts == 3) ++n_tris;
    }

    Scratch s;
    s.h0_pairs.reserve(n_edges / 2);
    s.edge_negative.reserve(n_edges);
    s.edge_positions.reserve(n_edges);

    const bool need_edge_index = opts.dim1 && n_tris > 0;
    EdgeIndex edge_index(need_edge_index ? n_edges : 0);
    sweep_edges(complex, s, need_edge_index ? &edge_index : nullptr);

    PersistenceDiagram out;
    std::vector<PersistencePair> pairs;

    if (opts.dim0) {
        pairs = std::move(s.h0_pairs);
        out.infinite[0] = std::move(s.h0_infinite);
    }

    if (opts.dim1) {
        std::vector<std::uint8_t> edge_tri_paired(complex.simplices.size(), 0);
        std::vector<PersistencePair> h1_pairs;
        if (n_tris > 0) reduce_triangles(complex, edge_index, h1_pairs, edge_tri_paired);
        pairs.insert(pairs.end(), h1_pairs.begin(), h1_pairs.end());
        // Positive edges never filled in remain as infinite classes.
        for (std::size_t rank = 0; rank < s.edge_positions.size(); ++rank) {
            const std::uint32_t pos = s.edge_positions[rank];
            if (!s.edge_negative[rank] && !edge_tri_paired[pos])
                out.infinite[1].push_back(complex.simplices[pos].value);
        }
    }

    finalize(out, opts, std::move(pairs));
    return out;
}

PersistenceDiagram h0_union_find(const FilteredComplex& complex,
                                 bool drop_zero_persistence) {
    ReductionOptions opts;
    opts.dim0 = true;
    opts.dim1 = false;
    opts.drop_zero_persistence = drop_zero_persistence;
    return compute_persistence(complex, opts);
}

PersistenceDiagram materialize_infinite(const PersistenceDiagram& diagram,
                                        double max_value) {
    PersistenceDiagram out;
    out.frame_index = diagram.frame_index;
    out.finite = diagram.finite;
    for (int dim = 0; dim < 2; ++dim) {
        for (double birth : diagram.infinite[dim]) {
            if (birth > max_value)
                throw std::invalid_argument("max_value below an infinite birth");
            if (birth < max_value)
                out.finite.push_back({dim, birth, max_value - birth});
        }
    }
    std::sort(out.finite.begin(), out.finite.end(), [](const auto& a, const auto& b) {
        if (a.dim != b.dim) return a.dim < b.dim;
        if (a.birth != b.birth) return a.birth < b.birth;
        return a.persistence < b.persistence;
    });
    return out;
}

}  // namespace tdacp
