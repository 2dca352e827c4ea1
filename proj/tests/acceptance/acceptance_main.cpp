// Acceptance suite: one PASS/FAIL line per criterion, exit 1 if any fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "aamr/commands.hpp"
#include "aamr/matrix.hpp"
#include "aamr/oracles.hpp"
#include "aamr/problem.hpp"
#include "aamr/rate.hpp"
#include "aamr/solver.hpp"
#include "aamr/trace_io.hpp"
#include "test_support.hpp"

namespace {

using namespace aamr;
using testing::Rng;

// Pinned tolerances.
constexpr double kOracleAgreement = 1e-6;
constexpr double kRunSeconds = 5.0;
constexpr double kGapFloor = -1e-8;
constexpr double kMonotoneSlack = 1e-10;
constexpr std::int64_t kRateIterations = 10000;
constexpr std::int64_t kFiniteTermBudget = 100000;
constexpr int kRestarts = 10;
constexpr double kDeltaRelTol = 1e-9;
constexpr int kPropertyTrials = 1000;
constexpr double kOracleTol = 1e-12;
constexpr std::int64_t kOracleMaxIter = 2000000;

#ifndef AAMR_PROBLEMS_DIR
#define AAMR_PROBLEMS_DIR "problems"
#endif

int failures = 0;

void report(int id, bool ok, const std::string& name, const std::string& detail) {
  if (!ok) ++failures;
  std::cout << "criterion " << id << ' ' << (ok ? "PASS" : "FAIL") << ' ' << name << ": "
            << detail << std::endl;
}

Vector vec(std::initializer_list<double> xs) {
  Vector v(static_cast<Index>(xs.size()));
  Index i = 0;
  for (double x : xs) v[i++] = x;
  return v;
}

ProblemFile make_problem(ConvexSet a, ConvexSet b, Vector q, std::optional<Vector> x0 = {}) {
  const Index dim = a.dimension();
  Vector start = x0 ? *x0 : Vector::Zero(q.size());
  return ProblemFile{dim, std::move(a), std::move(b), std::move(q), std::move(start), {}, {}};
}

// Rows fixing every diagonal entry of an order-n symmetric matrix.
ConvexSet unit_diagonal(int n) {
  Eigen::MatrixXd rows = Eigen::MatrixXd::Zero(n, embedded_dimension(n));
  for (int i = 0; i < n; ++i) rows(i, i) = 1.0;
  return ConvexSet::affine(rows, Vector::Ones(n));
}

struct Named {
  std::string name;
  ProblemFile problem;
};

std::vector<Named> feasible_suite() {
  Rng rng(20240601);
  std::vector<Named> suite;
  suite.push_back({"halfspace_ball_2", make_problem(ConvexSet::halfspace(vec({-1, 0}), -0.5),
                                                    ConvexSet::ball(vec({0, 0}), 1),
                                                    vec({-1, 1}))});
  suite.push_back({"hyperplane_halfspace_3",
                   make_problem(ConvexSet::hyperplane(vec({1, 1, 1}), 1),
                                ConvexSet::halfspace(vec({1, -1, 0}), -0.2), vec({2, 1, -3}))});
  suite.push_back({"box_ball_3", make_problem(ConvexSet::box(Vector::Zero(3), Vector::Ones(3)),
                                              ConvexSet::ball(Vector::Constant(3, 1.5), 1.2),
                                              vec({3, -1, 2}))});
  suite.push_back({"box_box_5",
                   make_problem(ConvexSet::box(Vector::Constant(5, -1), Vector::Constant(5, 1)),
                                ConvexSet::box(Vector::Constant(5, 0), Vector::Constant(5, 2)),
                                testing::random_vector(rng, 5, 3.0))});
  suite.push_back({"ball_ball_10",
                   make_problem(ConvexSet::ball(Vector::Zero(10), 1.0),
                                ConvexSet::ball(Vector::Constant(10, 0.5 / std::sqrt(10.0)), 1.0),
                                testing::random_vector(rng, 10, 3.0))});
  {
    const Eigen::MatrixXd rows = Eigen::MatrixXd::Random(3, 8);
    const Vector z = Vector::Constant(8, 1.0) + 0.5 * Vector::Random(8);
    suite.push_back({"affine_orthant_8",
                     make_problem(ConvexSet::affine(rows, rows * z), ConvexSet::nonneg_orthant(8),
                                  testing::random_vector(rng, 8, 2.0))});
  }
  suite.push_back({"halfspace_ball_20",
                   make_problem(ConvexSet::halfspace(testing::random_vector(rng, 20), 0.3),
                                ConvexSet::ball(testing::random_vector(rng, 20, 0.1), 1.0),
                                testing::random_vector(rng, 20, 2.0))});
  for (int n : {3, 8, 9}) {
    suite.push_back({"psd_unit_diagonal_" + std::to_string(n) + "x" + std::to_string(n),
                     make_problem(unit_diagonal(n), ConvexSet::psd_cone(n),
                                  embed(testing::random_symmetric(rng, n)))});
  }
  {
    const int n = 5;
    Eigen::MatrixXd rows(4, embedded_dimension(n));
    for (Index i = 0; i < rows.rows(); ++i) {
      rows.row(i) = embed(testing::random_symmetric(rng, n)).transpose();
    }
    const Vector feasible = embed(SymMatrix::identity(n));
    suite.push_back({"psd_affine_5x5",
                     make_problem(ConvexSet::affine(rows, rows * feasible), ConvexSet::psd_cone(n),
                                  embed(testing::random_symmetric(rng, n, 2.0)))});
  }
  {
    const int n = 6;
    Eigen::MatrixXd trace_row = Eigen::MatrixXd::Zero(1, embedded_dimension(n));
    trace_row.leftCols(n).setOnes();
    suite.push_back({"spectral_box_trace_6x6",
                     make_problem(ConvexSet::affine(trace_row, vec({3})),
                                  ConvexSet::spectral_box(n, 0, 1),
                                  embed(testing::random_symmetric(rng, n, 2.0)))});
  }
  return suite;
}

// sup over the trace of ||(I-R)x_{n+1}|| - ||(I-R)x_n||, from fp residuals.
double worst_fp_increase(const std::vector<IterationRecord>& trace, double alpha) {
  double worst = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 1; i < trace.size(); ++i) {
    worst = std::max(worst, (trace[i].fp_residual - trace[i - 1].fp_residual) / alpha);
  }
  return worst;
}

std::string fmt(double v) { return format_real(v); }

// Tolerances print as written.
std::string tol(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%g", v);
  return buf;
}

}  // namespace

int main() {
  const std::vector<Named> suite = feasible_suite();
  double worst_monotone = -std::numeric_limits<double>::infinity();
  bool monotone_flags_ok = true;

  // 1. AAMR shadow limit vs Dykstra.
  {
    double worst_err = 0.0, worst_time = 0.0;
    Index max_dim = 0, min_dim = 1 << 30;
    std::string worst_name;
    bool all_converged = true;
    for (const Named& inst : suite) {
      const AamrParams params = make_params(inst.problem);
      const auto t0 = std::chrono::steady_clock::now();
      const RunResult res = run_aamr(inst.problem.a, inst.problem.b, params);
      const double secs =
          std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
      const OracleResult oracle =
          dykstra(inst.problem.a, inst.problem.b, inst.problem.q, kOracleMaxIter, kOracleTol);
      all_converged = all_converged && res.status == RunStatus::kConverged && oracle.converged;
      const double err = (res.solution - oracle.point).norm();
      if (err > worst_err) worst_name = inst.name;
      worst_err = std::max(worst_err, err);
      worst_time = std::max(worst_time, secs);
      max_dim = std::max(max_dim, inst.problem.dimension);
      min_dim = std::min(min_dim, inst.problem.dimension);
      worst_monotone = std::max(worst_monotone, worst_fp_increase(res.trace, params.alpha));
    }
    const bool ok = suite.size() >= 10 && all_converged && worst_err <= kOracleAgreement &&
                    worst_time <= kRunSeconds;
    report(1, ok, "oracle equivalence",
           std::to_string(suite.size()) + " instances, dims " + std::to_string(min_dim) + "-" +
               std::to_string(max_dim) + ", max |aamr - dykstra| " + fmt(worst_err) +
               (worst_name.empty() ? "" : " (" + worst_name + ")") + " <= " +
               tol(kOracleAgreement) + ", slowest run " + fmt(worst_time) + " s" +
               (all_converged ? "" : ", NOT ALL CONVERGED"));
  }

  // 2. KM inequality through the check command.
  {
    double min_gap = std::numeric_limits<double>::infinity();
    int nonzero_exits = 0;
    for (const Named& inst : suite) {
      std::ostringstream sink;
      CommandOptions opts;
      opts.quiet = true;
      if (cmd_check(inst.problem, opts, sink) != 0) ++nonzero_exits;
      const CheckStudy study = check_study(inst.problem, opts);
      min_gap = std::min(min_gap, study.min_gap);
      for (const KmCheck& c : study.checks) monotone_flags_ok = monotone_flags_ok && c.monotone_ok;
    }
    report(2, nonzero_exits == 0 && min_gap >= kGapFloor, "KM inequality",
           std::to_string(nonzero_exits) + " nonzero check exits, min gap " + fmt(min_gap) +
               " >= " + tol(kGapFloor));
  }

  // 4 first: its long runs also feed the monotonicity tally.
  std::vector<Named> rate_suite;
  rate_suite.push_back({"ball_halfspace", make_problem(ConvexSet::ball(vec({0, 0}), 1),
                                                      ConvexSet::halfspace(vec({1, 1}), 1),
                                                      vec({2, 2}))});
  rate_suite.push_back({"ball_ball", make_problem(ConvexSet::ball(vec({0, 0}), 1),
                                                 ConvexSet::ball(vec({1.5, 0}), 1),
                                                 vec({0, 3}))});
  rate_suite.push_back({"box_ball_3", make_problem(ConvexSet::box(Vector::Zero(3), Vector::Ones(3)),
                                                  ConvexSet::ball(Vector::Constant(3, 1.5), 1.2),
                                                  vec({3, -1, 2}))});
  std::string rate_detail;
  bool rate_ok = true;
  for (const Named& inst : rate_suite) {
    CommandOptions opts;
    opts.alpha = 0.01;
    opts.n_max = kRateIterations;
    const RateStudy study = rate_study(inst.problem, opts);
    const auto& tr = study.run.trace;
    auto window_max = [&](std::int64_t n) {
      double m = 0.0;
      for (std::int64_t k = n; k <= 2 * n; ++k) {
        m = std::max(m, tr[static_cast<std::size_t>(k)].scaled_residual);
      }
      return m;
    };
    const double early = window_max(100), late = window_max(1000);
    const bool ok = static_cast<std::int64_t>(tr.size()) == kRateIterations + 1 && early > 0.0 &&
                    late < early && study.report.fitted_slope <= kRateSlopeThreshold;
    rate_ok = rate_ok && ok;
    rate_detail += (rate_detail.empty() ? "" : "; ") + inst.name + " max[100,200] " + fmt(early) +
                   " max[1000,2000] " + fmt(late) + " slope " + fmt(study.report.fitted_slope);
    worst_monotone = std::max(worst_monotone, worst_fp_increase(tr, 0.01));
  }

  // 5. Finite termination on the orthant and PSD sample problems.
  std::string ft_detail;
  bool ft_ok = true;
  for (const char* file : {"line_orthant.json", "psd_diag.json"}) {
    const ProblemFile p = parse_problem(std::filesystem::path(AAMR_PROBLEMS_DIR) / file);
    const FiniteTermSpec& spec = *p.finite_term;
    AamrParams params = make_params(p);
    params.max_iter = kFiniteTermBudget;
    const RunResult first =
        run_finite_termination(p.a, p.b, spec.e, spec.gamma, params, spec.margin);
    const bool base_ok = first.status == RunStatus::kFinitelyTerminated &&
                         *first.termination_index <= kFiniteTermBudget &&
                         interior_slack(p.b, first.solution) >= spec.margin;
    worst_monotone = std::max(worst_monotone, worst_fp_increase(first.trace, params.alpha));

    // Restarts from starts that depend on w: reflected through the origin,
    // scaled and perturbed.
    int restarts_ok = 0;
    std::int64_t worst_l0 = *first.termination_index;
    Rng rng(7);
    const Vector& w = first.solution;
    for (int k = 0; k < kRestarts; ++k) {
      AamrParams rp = params;
      rp.x0 = -(1.0 + k) * w + (1.0 + w.norm()) * testing::random_vector(rng, w.size());
      const RunResult r = run_finite_termination(p.a, p.b, spec.e, spec.gamma, rp, spec.margin);
      if (r.status == RunStatus::kFinitelyTerminated &&
          *r.termination_index <= kFiniteTermBudget &&
          interior_slack(p.b, r.solution) >= spec.margin) {
        ++restarts_ok;
        worst_l0 = std::max(worst_l0, *r.termination_index);
      }
      worst_monotone = std::max(worst_monotone, worst_fp_increase(r.trace, rp.alpha));
    }
    ft_ok = ft_ok && base_ok && restarts_ok == kRestarts;
    ft_detail += std::string(ft_detail.empty() ? "" : "; ") + file + " l0 " +
                 std::to_string(*first.termination_index) + " slack " +
                 fmt(interior_slack(p.b, first.solution)) + " restarts " +
                 std::to_string(restarts_ok) + "/" + std::to_string(kRestarts) + " max l0 " +
                 std::to_string(worst_l0);
  }

  // 3. Monotone fixed-point defect across every run above.
  report(3, monotone_flags_ok && worst_monotone <= kMonotoneSlack, "monotone residual",
         "max increase of ||(I-R)x_n|| " + fmt(worst_monotone) + " <= " + tol(kMonotoneSlack));
  report(4, rate_ok && rate_suite.size() >= 3, "rate o(1/sqrt n)", rate_detail);
  report(5, ft_ok, "finite termination", ft_detail);

  // 6. PSD interior slack of P + delta I.
  {
    Rng rng(99);
    double worst_ratio = std::numeric_limits<double>::infinity();
    int bad = 0;
    for (int trial = 0; trial < 100; ++trial) {
      const int n = testing::uniform_int(rng, 2, 8);
      const SymMatrix p = testing::random_psd(rng, n);
      for (double delta : {1e-3, 1e-1, 1.0}) {
        const Eigen::MatrixXd shifted = p.dense() + delta * Eigen::MatrixXd::Identity(n, n);
        const double slack =
            interior_slack(ConvexSet::psd_cone(n), embed(SymMatrix::from_dense(shifted)));
        worst_ratio = std::min(worst_ratio, slack / delta);
        if (slack < delta * (1 - kDeltaRelTol)) ++bad;
      }
    }
    report(6, bad == 0, "PSD delta slack",
           "300 cases, " + std::to_string(bad) + " below delta (1 - 1e-9), worst slack/delta " +
               fmt(worst_ratio));
  }

  // 7. Projection properties, every variant.
  {
    std::string detail;
    int total_fail = 0;
    double worst = 0.0;
    const auto gens = testing::variant_generators();
    for (std::size_t i = 0; i < gens.size(); ++i) {
      Rng rng(5000 + i);
      const testing::PropertyTally t =
          testing::check_projection_properties(gens[i], rng, kPropertyTrials);
      total_fail += t.failures();
      worst = std::max(worst, t.worst_excess);
      if (t.failures() > 0) detail += " " + gens[i].name + "=" + std::to_string(t.failures());
    }
    report(7, total_fail == 0, "projection properties",
           std::to_string(gens.size()) + " variants x " + std::to_string(kPropertyTrials) +
               " trials, " + std::to_string(total_fail) + " failures" + detail +
               ", worst excess " + fmt(worst));
  }

  // 8. Byte-identical traces.
  {
    int differing = 0;
    std::size_t bytes = 0;
    for (const Named& inst : suite) {
      auto csv = [&] {
        AamrParams params = make_params(inst.problem);
        params.record_shadow = true;
        std::ostringstream out;
        write_trace_csv(out, run_aamr(inst.problem.a, inst.problem.b, params).trace);
        return out.str();
      };
      const std::string first = csv();
      bytes += first.size();
      if (first != csv()) ++differing;
    }
    report(8, differing == 0, "determinism",
           std::to_string(suite.size()) + " traces (" + std::to_string(bytes) + " bytes), " +
               std::to_string(differing) + " differ");
  }

  std::cout << (failures == 0 ? "all criteria passed" : std::to_string(failures) + " failed")
            << std::endl;
  return failures == 0 ? 0 : 1;
}
