#include "aamr/solver.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "aamr/oracles.hpp"

namespace aamr {
namespace {

constexpr double kMonotoneTol = 1e-10;
constexpr double kFeasibilityGap = 1e-7;
constexpr std::int64_t kFeasibilityBudget = 200000;

// One application of the operator pair, sharing the two projections.
struct Step {
  Vector pa;  // P_A(x)
  Vector r;   // R(x)
  Vector t;   // T(x)
};

Step evaluate(const ConvexSet& a, const ConvexSet& b, double alpha,
              double beta, const Vector& x) {
  Step s;
  s.pa = project(a, x);
  const Vector w = 2.0 * beta * s.pa - x;
  s.r = 2.0 * beta * project(b, w) - w;
  s.t = (1.0 - alpha) * x + alpha * s.r;
  return s;
}

void require_unit_interval(std::string_view name, double v) {
  if (!(v > 0.0 && v < 1.0)) {
    throw InvalidInput(std::string(name) + " must lie in (0, 1), got " +
                       std::to_string(v));
  }
}

void guard_divergence(const Vector& x, std::int64_t n) {
  if (!x.allFinite() || x.cwiseAbs().maxCoeff() > kDivergenceBound) {
    throw NumericalFailure("iterate " + std::to_string(n) +
                           " left the divergence bound; the intersection may "
                           "be empty or the constraint qualification fail");
  }
}

}  // namespace

void AamrParams::validate(Index dim) const {
  require_unit_interval("alpha", alpha);
  require_unit_interval("beta", beta);
  if (!(fp_tol > 0.0)) throw InvalidInput("fp_tol must be > 0");
  if (max_iter < 1) throw InvalidInput("max_iter must be >= 1");
  require_dimension("q", dim, q.size());
  require_dimension("x0", dim, x0.size());
  require_finite("q", q);
  require_finite("x0", x0);
}

std::string_view to_string(RunStatus status) {
  switch (status) {
    case RunStatus::kConverged:
      return "converged";
    case RunStatus::kMaxIterReached:
      return "max_iter_reached";
    case RunStatus::kFinitelyTerminated:
      return "finitely_terminated";
  }
  return "unknown";
}

Vector r_operator(const ConvexSet& a, const ConvexSet& b, double beta,
                  const Vector& x) {
  require_unit_interval("beta", beta);
  return modified_reflect(b, modified_reflect(a, x, beta), beta);
}

Vector t_operator(const ConvexSet& a, const ConvexSet& b, double alpha,
                  double beta, const Vector& x) {
  require_unit_interval("alpha", alpha);
  return (1.0 - alpha) * x + alpha * r_operator(a, b, beta, x);
}

double residual(const ConvexSet& a, const ConvexSet& b, const Vector& q,
                const Vector& x) {
  require_dimension("residual q", a.dimension(), q.size());
  require_dimension("residual: A vs B", a.dimension(), b.dimension());
  const Vector y = project(a, x + q);
  return (y - project(b, y)).norm();
}

RunResult run_aamr(const ConvexSet& a, const ConvexSet& b,
                   const AamrParams& params,
                   const std::optional<Vector>& reference) {
  const Index dim = a.dimension();
  require_dimension("run_aamr: A vs B", dim, b.dimension());
  params.validate(dim);
  if (reference) require_dimension("reference fixed point", dim, reference->size());

  const Vector minus_q = -params.q;
  const ConvexSet a_shift = ConvexSet::shifted(a, minus_q);
  const ConvexSet b_shift = ConvexSet::shifted(b, minus_q);
  const double km_weight = params.alpha * (1.0 - params.alpha);

  RunResult result;
  result.trace.reserve(static_cast<std::size_t>(
      std::min<std::int64_t>(params.max_iter, 1 << 16)));
  if (params.record_iterates) result.iterates.push_back(params.x0);

  Vector x = params.x0;
  for (std::int64_t n = 0; n < params.max_iter; ++n) {
    Step s = evaluate(a_shift, b_shift, params.alpha, params.beta, x);
    // P_{A-q}(x) = P_A(x + q) - q.
    Vector y = s.pa + params.q;

    IterationRecord rec;
    rec.n = n;
    rec.fp_residual = (s.t - x).norm();
    rec.r_residual = (y - project(b, y)).norm();
    rec.scaled_residual = std::sqrt(static_cast<double>(n)) * rec.r_residual;
    if (reference) {
      rec.km_gap = (x - *reference).squaredNorm() -
                   (s.t - *reference).squaredNorm() -
                   km_weight * (x - s.r).squaredNorm();
    }
    if (params.record_shadow) rec.shadow = std::move(y);

    x = std::move(s.t);
    guard_divergence(x, n + 1);
    if (params.record_iterates) result.iterates.push_back(x);
    const bool done = params.stop_on_fp_tol && rec.fp_residual <= params.fp_tol;
    result.trace.push_back(std::move(rec));
    if (done) {
      result.status = RunStatus::kConverged;
      break;
    }
  }
  result.solution = project(a, x + params.q);
  result.final_x = std::move(x);
  return result;
}

Vector reference_fixed_point(const ConvexSet& a, const ConvexSet& b,
                             const AamrParams& params) {
  AamrParams p = params;
  p.fp_tol = kReferenceFpTol;
  p.record_shadow = false;
  p.record_iterates = false;
  p.stop_on_fp_tol = true;
  RunResult run = run_aamr(a, b, p);
  if (run.status != RunStatus::kConverged) {
    throw PreconditionFailure(
        "reference fixed point: iteration did not reach fixed-point residual " +
        std::to_string(kReferenceFpTol) + " within " +
        std::to_string(p.max_iter) + " iterations");
  }
  return run.final_x;
}

std::vector<KmCheck> check_km_inequalities(std::span<const Vector> trace_x,
                                           const ConvexSet& a,
                                           const ConvexSet& b, const Vector& q,
                                           double alpha, double beta,
                                           const Vector& u) {
  require_unit_interval("alpha", alpha);
  require_unit_interval("beta", beta);
  const Vector minus_q = -q;
  const ConvexSet a_shift = ConvexSet::shifted(a, minus_q);
  const ConvexSet b_shift = ConvexSet::shifted(b, minus_q);

  const double fixed_defect = (r_operator(a_shift, b_shift, beta, u) - u).norm();
  if (!(fixed_defect <= kFixedPointCheckTol)) {
    throw PreconditionFailure("check_km_inequalities: ||R(u) - u|| = " +
                              std::to_string(fixed_defect) +
                              " exceeds 1e-8; u is not a fixed point");
  }

  std::vector<KmCheck> checks;
  if (trace_x.size() < 2) return checks;
  checks.reserve(trace_x.size() - 1);
  const double km_weight = alpha * (1.0 - alpha);
  auto defect = [&](const Vector& x) {
    return (x - r_operator(a_shift, b_shift, beta, x)).norm();
  };
  double defect_n = defect(trace_x[0]);
  for (std::size_t n = 0; n + 1 < trace_x.size(); ++n) {
    const double defect_next = defect(trace_x[n + 1]);
    KmCheck c;
    c.gap = (trace_x[n] - u).squaredNorm() - (trace_x[n + 1] - u).squaredNorm() -
            km_weight * defect_n * defect_n;
    c.monotone_ok = defect_next <= defect_n + kMonotoneTol;
    checks.push_back(c);
    defect_n = defect_next;
  }
  return checks;
}

bool validate_gamma(const ConvexSet& a, const ConvexSet& b, const Vector& e,
                    double gamma) {
  if (!(gamma > 0.0) || !std::isfinite(gamma)) {
    throw InvalidInput("validate_gamma: gamma must be > 0");
  }
  require_dimension("validate_gamma: A vs B", a.dimension(), b.dimension());
  require_dimension("validate_gamma: e", b.dimension(), e.size());
  const ConvexSet b_shift = ConvexSet::shifted(b, gamma * e);
  const OracleResult res =
      alternating_projections(a, b_shift, Vector::Zero(a.dimension()),
                              kFeasibilityBudget, 1e-9);
  return res.gap <= kFeasibilityGap;
}

RunResult run_finite_termination(const ConvexSet& a, const ConvexSet& b,
                                 const Vector& e, double gamma,
                                 const AamrParams& params, double margin) {
  const Index dim = a.dimension();
  require_dimension("run_finite_termination: A vs B", dim, b.dimension());
  require_dimension("run_finite_termination: e", dim, e.size());
  require_finite("e", e);
  require_unit_interval("alpha", params.alpha);
  require_unit_interval("beta", params.beta);
  require_dimension("x0", dim, params.x0.size());
  require_finite("x0", params.x0);
  if (params.max_iter < 1) throw InvalidInput("max_iter must be >= 1");
  if (!(margin > 0.0)) throw InvalidInput("margin must be > 0");
  if (!(gamma > 0.0) || !std::isfinite(gamma)) {
    throw InvalidInput("gamma must be > 0");
  }

  if (!b.is_cone()) {
    throw PreconditionFailure("finite termination requires B to be a closed "
                              "convex cone, got " + std::string(b.kind()));
  }
  if (!interior_contains(b, e, margin)) {
    throw PreconditionFailure("e is not interior to B (slack " +
                              std::to_string(interior_slack(b, e)) + ")");
  }
  if (!validate_gamma(a, b, e, gamma)) {
    throw PreconditionFailure("A and B + gamma*e do not intersect for gamma = " +
                              std::to_string(gamma));
  }

  const ConvexSet b_shift = ConvexSet::shifted(b, gamma * e);
  RunResult result;
  if (params.record_iterates) result.iterates.push_back(params.x0);

  Vector z = params.x0;
  for (std::int64_t n = 0; n < params.max_iter; ++n) {
    Step s = evaluate(a, b_shift, params.alpha, params.beta, z);

    IterationRecord rec;
    rec.n = n;
    rec.r_residual = (s.pa - project(b_shift, s.pa)).norm();
    rec.scaled_residual = std::sqrt(static_cast<double>(n)) * rec.r_residual;
    rec.fp_residual = (s.t - z).norm();
    if (params.record_shadow) rec.shadow = s.pa;

    if (interior_contains(b, s.pa, margin)) {
      result.trace.push_back(std::move(rec));
      result.status = RunStatus::kFinitelyTerminated;
      result.termination_index = n;
      result.solution = std::move(s.pa);
      result.final_x = std::move(z);
      return result;
    }
    z = std::move(s.t);
    guard_divergence(z, n + 1);
    if (params.record_iterates) result.iterates.push_back(z);
    result.trace.push_back(std::move(rec));
  }
  result.status = RunStatus::kMaxIterReached;
  result.solution = project(a, z);
  result.final_x = std::move(z);
  return result;
}

}  // namespace aamr
