#ifndef AAMR_TRACE_IO_HPP_
#define AAMR_TRACE_IO_HPP_

#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "aamr/solver.hpp"

namespace aamr {

// Shortest round-trip-safe text for doubles: 17 significant digits.
std::string format_real(double v);

// Columns: n, fp_residual, r_residual, scaled_residual, km_gap (empty when
// unset), then y_0 ... y_{d-1} when the records carry shadows. One header
// line plus one row per record.
void write_trace_csv(std::ostream& out, std::span<const IterationRecord> trace);
std::vector<IterationRecord> read_trace_csv(std::istream& in);

}  // namespace aamr

#endif  // AAMR_TRACE_IO_HPP_
