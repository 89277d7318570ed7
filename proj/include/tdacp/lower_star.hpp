#pragma once

#include "tdacp/types.hpp"

namespace tdacp {

// Sublevel-set filtration of a scalar grid. Pixels become vertices at their
// own value; 4-neighbor edges plus one fixed diagonal per unit square
// (top-left to bottom-right, Freudenthal) triangulate the grid, and every
// edge/triangle enters at the max of its vertex values.
FilteredComplex build_lower_star(const ScalarGrid& grid);

}  // namespace tdacp
