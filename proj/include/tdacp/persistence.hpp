#pragma once

#include "tdacp/types.hpp"

namespace tdacp {

struct ReductionOptions {
    bool dim0 = true;
    bool dim1 = true;
    // Pairs with death == birth carry no mass; dropped unless a caller (e.g.
    // an oracle comparison) wants them.
    bool drop_zero_persistence = true;
};

// Persistence of a filtered complex in tilted coordinates. Dimension 0 comes
// from a union-find sweep over the edges (elder rule, ties to the smaller
// vertex id); dimension 1 from Z/2 column reduction of the triangle boundary
// matrix, processed after the edge sweep so cleared columns are never
// touched. Throws std::invalid_argument("invalid filtration: ...") when the
// input violates the FilteredComplex invariants.
PersistenceDiagram compute_persistence(const FilteredComplex& complex,
                                       const ReductionOptions& opts = {});

// Dimension-0 fast path; identical dim-0 output to compute_persistence.
PersistenceDiagram h0_union_find(const FilteredComplex& complex,
                                 bool drop_zero_persistence = true);

// Copy of the diagram with every infinite birth turned into a finite pair
// (birth, max_value - birth), for callers who want never-dying features to
// carry histogram mass. Births above max_value are rejected.
PersistenceDiagram materialize_infinite(const PersistenceDiagram& diagram,
                                        double max_value);

}  // namespace tdacp
