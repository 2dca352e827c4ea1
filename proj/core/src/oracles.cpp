#include "aamr/oracles.hpp"

#include <algorithm>

namespace aamr {
namespace {

void require_budget(std::int64_t max_iter, double tol) {
  if (max_iter < 1) throw InvalidInput("oracle: max_iter must be >= 1");
  if (!(tol > 0.0)) throw InvalidInput("oracle: tol must be > 0");
}

}  // namespace

OracleResult dykstra(const ConvexSet& a, const ConvexSet& b, const Vector& q,
                     std::int64_t max_iter, double tol) {
  require_budget(max_iter, tol);
  require_dimension("dykstra: A vs B", a.dimension(), b.dimension());
  require_dimension("dykstra: q", a.dimension(), q.size());
  require_finite("dykstra: q", q);

  const Index dim = q.size();
  Vector x = q;
  Vector p = Vector::Zero(dim);  // correction for A
  Vector r = Vector::Zero(dim);  // correction for B
  OracleResult out;
  for (std::int64_t k = 1; k <= max_iter; ++k) {
    const Vector y = project(a, x + p);
    p += x - y;
    Vector x_next = project(b, y + r);
    r += y - x_next;

    out.gap = (y - x_next).norm();
    const double change = (x_next - x).norm();
    x = std::move(x_next);
    out.iterations = k;
    if (out.gap <= tol && change <= tol) {
      out.converged = true;
      break;
    }
  }
  out.point = std::move(x);
  return out;
}

OracleResult alternating_projections(const ConvexSet& a, const ConvexSet& b,
                                     const Vector& x0, std::int64_t max_iter,
                                     double tol) {
  require_budget(max_iter, tol);
  require_dimension("alternating_projections: A vs B", a.dimension(),
                    b.dimension());
  require_dimension("alternating_projections: x0", a.dimension(), x0.size());
  require_finite("alternating_projections: x0", x0);

  Vector x = x0;
  OracleResult out;
  for (std::int64_t k = 1; k <= max_iter; ++k) {
    const Vector pb = project(b, x);
    Vector next = project(a, pb);
    out.gap = (pb - next).norm();
    const double change = (next - x).norm();
    x = std::move(next);
    out.iterations = k;
    if (out.gap <= tol) {
      out.converged = true;
      break;
    }
    // Stalled at a positive gap: the iterates have settled on a pair of
    // nearest points of two disjoint sets.
    if (change <= 1e-15 * std::max(1.0, x.norm())) break;
  }
  out.point = std::move(x);
  return out;
}

}  // namespace aamr
