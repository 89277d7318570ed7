#pragma once

#include "tdacp/histogram.hpp"
#include "tdacp/types.hpp"

#include <iosfwd>
#include <string>
#include <vector>

namespace tdacp {

// Decimal form with 17 significant digits (printf %.17g); round-trips
// through strtod bit for bit.
std::string format_double(double x);

// One diagram per line:
//   {"t": 3, "dim0": {"finite": [[birth, persistence], ...],
//    "infinite": [birth, ...]}, "dim1": {...}}
std::string diagram_record_line(const PersistenceDiagram& diagram);
void write_diagram_records(std::ostream& out, const std::vector<PersistenceDiagram>& diagrams);
std::vector<PersistenceDiagram> read_diagram_records(std::istream& in);

// Flat JSON document with fields version, M, breakpoints, sigma, trained_dim,
// training_frames. The loader throws std::runtime_error("model mismatch: ...")
// on any structural inconsistency.
std::string model_to_json(const HistogramModel& model);
HistogramModel model_from_json(const std::string& text);

// Point cloud CSV: one point per row, coordinates only, no header.
PointCloud read_points_csv(std::istream& in);
void write_points_csv(std::ostream& out, const PointCloud& cloud);

// Netpbm grayscale: P2 (ASCII) and P5 (binary) with maxval <= 65535. P5
// samples above 255 are two bytes, most significant first.
ScalarGrid read_pgm(std::istream& in);
void write_pgm_p5(std::ostream& out, const ScalarGrid& grid, unsigned maxval = 65535);

}  // namespace tdacp
