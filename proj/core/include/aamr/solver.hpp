#ifndef AAMR_SOLVER_HPP_
#define AAMR_SOLVER_HPP_

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "aamr/error.hpp"
#include "aamr/geometry.hpp"

namespace aamr {

inline constexpr double kDefaultAlpha = 0.5;
inline constexpr double kDefaultBeta = 0.7;
inline constexpr double kDefaultFpTol = 1e-10;
inline constexpr std::int64_t kDefaultMaxIter = 100000;
// Any iterate coordinate beyond this magnitude aborts the run.
inline constexpr double kDivergenceBound = 1e12;
// Tolerances of the fixed-point reference used by the KM verifier.
inline constexpr double kReferenceFpTol = 1e-12;
inline constexpr double kFixedPointCheckTol = 1e-8;

struct AamrParams {
  double alpha = kDefaultAlpha;
  double beta = kDefaultBeta;
  Vector q;   // anchor: the point whose projection onto A∩B is sought
  Vector x0;  // starting iterate
  std::int64_t max_iter = kDefaultMaxIter;
  double fp_tol = kDefaultFpTol;
  bool record_shadow = false;
  // Keep x_0, ..., x_N in RunResult::iterates.
  bool record_iterates = false;
  // When false the run always spends the whole budget (rate studies).
  bool stop_on_fp_tol = true;

  // Throws InvalidInput unless 0 < alpha, beta < 1, fp_tol > 0,
  // max_iter >= 1 and q, x0 are finite points of dimension `dim`.
  void validate(Index dim) const;
};

struct IterationRecord {
  std::int64_t n = 0;
  double fp_residual = 0.0;      // ||x_{n+1} - x_n||
  double r_residual = 0.0;       // r(x_n) = ||y_n - P_B(y_n)||
  double scaled_residual = 0.0;  // sqrt(n) * r(x_n)
  std::optional<double> km_gap;
  std::optional<Vector> shadow;  // y_n
};

enum class RunStatus { kConverged, kMaxIterReached, kFinitelyTerminated };

std::string_view to_string(RunStatus status);

struct RunResult {
  RunStatus status = RunStatus::kMaxIterReached;
  // Index l0 of the first shadow point found interior to B.
  std::optional<std::int64_t> termination_index;
  Vector solution;
  std::vector<IterationRecord> trace;
  Vector final_x;
  std::vector<Vector> iterates;

  std::int64_t iterations() const {
    return static_cast<std::int64_t>(trace.size());
  }
};

// (2 beta P_B - I)(2 beta P_A - I)(x)
Vector r_operator(const ConvexSet& a, const ConvexSet& b, double beta,
                  const Vector& x);

// (1 - alpha) x + alpha R(x)
Vector t_operator(const ConvexSet& a, const ConvexSet& b, double alpha,
                  double beta, const Vector& x);

// ||P_A(x + q) - P_B(P_A(x + q))||
double residual(const ConvexSet& a, const ConvexSet& b, const Vector& q,
                const Vector& x);

// Iterates x_{n+1} = T_{A-q, B-q, alpha, beta}(x_n) and tracks the shadow
// y_n = P_A(x_n + q). The returned solution is the shadow of the last
// iterate. With a reference fixed point `u` of R_{A-q, B-q, beta} every
// record also carries
//   km_gap = ||x_n - u||^2 - ||x_{n+1} - u||^2
//            - alpha (1 - alpha) ||(I - R)(x_n)||^2.
//
// Throws NumericalFailure when an iterate leaves the divergence bound.
RunResult run_aamr(const ConvexSet& a, const ConvexSet& b,
                   const AamrParams& params,
                   const std::optional<Vector>& reference = std::nullopt);

// Runs the iteration to kReferenceFpTol and returns the last iterate, a
// numerical fixed point of R_{A-q, B-q, beta}.
Vector reference_fixed_point(const ConvexSet& a, const ConvexSet& b,
                             const AamrParams& params);

struct KmCheck {
  double gap = 0.0;
  bool monotone_ok = true;
};

// One entry per consecutive pair (x_n, x_{n+1}) of `trace_x`:
//   gap = ||x_n - u||^2 - ||x_{n+1} - u||^2
//         - alpha (1 - alpha) ||(I - R)(x_n)||^2
//   monotone_ok = ||(I - R)(x_{n+1})|| <= ||(I - R)(x_n)|| + 1e-10
// where R = R_{A-q, B-q, beta}. Throws PreconditionFailure unless
// ||R(u) - u|| <= 1e-8.
std::vector<KmCheck> check_km_inequalities(std::span<const Vector> trace_x,
                                           const ConvexSet& a,
                                           const ConvexSet& b, const Vector& q,
                                           double alpha, double beta,
                                           const Vector& u);

// Decides numerically whether A ∩ (B + gamma e) is nonempty by alternating
// projections; true iff the terminal gap is <= 1e-7.
bool validate_gamma(const ConvexSet& a, const ConvexSet& b, const Vector& e,
                    double gamma);

// Shifted-cone scheme: w_n = P_A(z_n), z_{n+1} = T_{A, B + gamma e}(z_n),
// started from params.x0 (params.q is ignored). Stops at the first n with
// interior_contains(B, w_n, margin).
//
// Throws PreconditionFailure if B is not a cone, e is not interior to B or
// A ∩ (B + gamma e) is empty.
RunResult run_finite_termination(const ConvexSet& a, const ConvexSet& b,
                                 const Vector& e, double gamma,
                                 const AamrParams& params,
                                 double margin = kInteriorMargin);

}  // namespace aamr

#endif  // AAMR_SOLVER_HPP_
