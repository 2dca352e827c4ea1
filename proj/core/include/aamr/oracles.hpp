#ifndef AAMR_ORACLES_HPP_
#define AAMR_ORACLES_HPP_

#include <cstdint>

#include "aamr/error.hpp"
#include "aamr/geometry.hpp"

namespace aamr {

// Independent reference solvers. They share only the projections with the
// AAMR iteration.
struct OracleResult {
  Vector point;
  double gap = 0.0;  // distance between the A-iterate and the B-iterate
  std::int64_t iterations = 0;
  bool converged = false;
};

// Dykstra's algorithm for P_{A∩B}(q). Stops once both the gap and the change
// of the B-iterate over one sweep are <= tol; `point` is the B-iterate.
// An exhausted budget is reported through `converged`, not thrown.
OracleResult dykstra(const ConvexSet& a, const ConvexSet& b, const Vector& q,
                     std::int64_t max_iter, double tol);

// x <- P_A(P_B(x)) from x0 with gap = ||P_B(x) - P_A(P_B(x))||. Stops when
// the gap is <= tol or the iterate stalls; a persistent positive gap
// indicates that the sets do not intersect.
OracleResult alternating_projections(const ConvexSet& a, const ConvexSet& b,
                                     const Vector& x0, std::int64_t max_iter,
                                     double tol);

}  // namespace aamr

#endif  // AAMR_ORACLES_HPP_
