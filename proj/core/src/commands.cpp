#include "aamr/commands.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <ostream>
#include <string>

#include "aamr/trace_io.hpp"

namespace aamr {
namespace {

constexpr int code(ExitCode c) { return static_cast<int>(c); }

std::string format_point(const Vector& x) {
  std::string s;
  for (Index i = 0; i < x.size(); ++i) {
    if (i > 0) s += ' ';
    s += format_real(x[i]);
  }
  return s;
}

void write_trace(const std::optional<std::filesystem::path>& path,
                 std::span<const IterationRecord> trace) {
  if (!path) return;
  std::ofstream out(*path, std::ios::binary | std::ios::trunc);
  if (!out) throw InvalidInput("cannot open trace output " + path->string());
  write_trace_csv(out, trace);
  if (!out) throw InvalidInput("failed writing trace output " + path->string());
}

double noise_floor(const Vector& solution) {
  return 64.0 * std::numeric_limits<double>::epsilon() *
         std::max(1.0, solution.norm());
}

}  // namespace

AamrParams resolve_params(const ProblemFile& problem, const CommandOptions& opts) {
  AamrParams p = make_params(problem);
  if (opts.alpha) p.alpha = *opts.alpha;
  if (opts.beta) p.beta = *opts.beta;
  if (opts.max_iter) p.max_iter = *opts.max_iter;
  if (opts.tol) p.fp_tol = *opts.tol;
  p.validate(problem.dimension);
  return p;
}

RateStudy rate_study(const ProblemFile& problem, const CommandOptions& opts) {
  const std::int64_t n_max = opts.n_max.value_or(kDefaultRateIterations);
  if (n_max < 1) throw InvalidInput("--n-max must be >= 1");
  AamrParams params = resolve_params(problem, opts);

  std::optional<Vector> u;
  try {
    u = reference_fixed_point(problem.a, problem.b, params);
  } catch (const PreconditionFailure&) {
  }
  params.max_iter = n_max + 1;  // records n = 0 .. n_max
  params.stop_on_fp_tol = false;
  params.record_shadow = opts.trace_out.has_value();

  RateStudy study;
  study.run = run_aamr(problem.a, problem.b, params);
  study.report = rate_report(study.run.trace, noise_floor(study.run.solution));
  if (u) {
    study.summability = check_summability(study.run.trace, params.alpha,
                                          (params.x0 - *u).squaredNorm());
  }
  return study;
}

CheckStudy check_study(const ProblemFile& problem, const CommandOptions& opts) {
  AamrParams params = resolve_params(problem, opts);
  CheckStudy study;
  study.fixed_point = reference_fixed_point(problem.a, problem.b, params);

  params.record_iterates = true;
  params.record_shadow = opts.trace_out.has_value();
  study.run = run_aamr(problem.a, problem.b, params, study.fixed_point);

  std::vector<Vector>& xs = study.run.iterates;
  if (opts.corrupt_trace && xs.size() >= 2) {
    Vector away = xs[1] - study.fixed_point;
    const double norm = away.norm();
    if (norm > 0.0) {
      away /= norm;
    } else {
      away = Vector::Unit(away.size(), 0);
    }
    xs[1] += 10.0 * (1.0 + (xs[0] - study.fixed_point).norm()) * away;
  }

  study.checks = check_km_inequalities(xs, problem.a, problem.b, params.q,
                                       params.alpha, params.beta, study.fixed_point);
  study.min_gap = std::numeric_limits<double>::infinity();
  for (std::size_t n = 0; n < study.checks.size(); ++n) {
    const KmCheck& c = study.checks[n];
    study.min_gap = std::min(study.min_gap, c.gap);
    if (c.gap < -kKmGapTol || !c.monotone_ok) {
      study.violations.push_back({static_cast<std::int64_t>(n), c.gap, c.monotone_ok});
    }
  }
  if (study.checks.empty()) study.min_gap = 0.0;
  return study;
}

int cmd_run(const ProblemFile& problem, const CommandOptions& opts, std::ostream& out) {
  AamrParams params = resolve_params(problem, opts);
  params.record_shadow = opts.trace_out.has_value();
  const RunResult result = run_aamr(problem.a, problem.b, params);
  write_trace(opts.trace_out, result.trace);

  const IterationRecord& last = result.trace.back();
  if (!opts.quiet) {
    out << "status: " << to_string(result.status) << '\n'
        << "iterations: " << result.iterations() << '\n';
  }
  out << "solution: " << format_point(result.solution) << '\n';
  if (!opts.quiet) {
    out << "fp_residual: " << format_real(last.fp_residual) << '\n'
        << "r_residual: " << format_real(residual(problem.a, problem.b, params.q, result.final_x))
        << '\n';
  }
  return result.status == RunStatus::kConverged ? code(ExitCode::kSuccess)
                                                 : code(ExitCode::kNonConvergence);
}

int cmd_oracle(const ProblemFile& problem, const CommandOptions& opts, std::ostream& out) {
  const std::int64_t budget = opts.max_iter.value_or(kDefaultOracleMaxIter);
  const double tol = opts.tol.value_or(kDefaultOracleTol);
  const OracleResult res = dykstra(problem.a, problem.b, problem.q, budget, tol);
  if (!opts.quiet) out << "status: " << (res.converged ? "converged" : "max_iter_reached") << '\n';
  out << "solution: " << format_point(res.point) << '\n';
  if (!opts.quiet) {
    out << "gap: " << format_real(res.gap) << '\n'
        << "iterations: " << res.iterations << '\n';
  }
  return res.converged ? code(ExitCode::kSuccess) : code(ExitCode::kNonConvergence);
}

int cmd_rate(const ProblemFile& problem, const CommandOptions& opts, std::ostream& out) {
  const RateStudy study = rate_study(problem, opts);
  write_trace(opts.trace_out, study.run.trace);
  if (!opts.quiet) {
    for (const RateWindow& w : study.report.windows) {
      out << "window " << w.n << ' ' << 2 * w.n << ": max_scaled_residual "
          << format_real(w.max_scaled_residual) << '\n';
    }
    out << "fitted_slope: " << format_real(study.report.fitted_slope) << '\n'
        << "windows_decreasing: " << std::boolalpha << study.report.windows_decreasing << '\n';
    if (const auto& s = study.summability) {
      out << "summability: nonnegative " << s->nonnegative << ", monotone " << s->monotone
          << ", partial_sums " << format_real(s->max_partial_sum) << " <= "
          << format_real(s->bound) << ' ' << s->partial_sums_bounded << '\n';
    } else {
      out << "summability: skipped, no reference fixed point\n";
    }
  }
  const bool ok = study.report.verdict && (!study.summability || study.summability->ok());
  out << "verdict: " << (ok ? "pass" : "fail") << '\n';
  return ok ? code(ExitCode::kSuccess) : code(ExitCode::kNonConvergence);
}

int cmd_finterm(const ProblemFile& problem, const CommandOptions& opts, std::ostream& out) {
  if (!problem.finite_term) {
    throw InvalidInput("finterm: problem file has no finite_term block");
  }
  const FiniteTermSpec& spec = *problem.finite_term;
  AamrParams params = resolve_params(problem, opts);
  params.record_shadow = opts.trace_out.has_value();
  const double gamma = opts.gamma.value_or(spec.gamma);
  const double margin = opts.margin.value_or(spec.margin);

  const RunResult result =
      run_finite_termination(problem.a, problem.b, spec.e, gamma, params, margin);
  write_trace(opts.trace_out, result.trace);

  if (result.status != RunStatus::kFinitelyTerminated) {
    out << "status: " << to_string(result.status) << '\n'
        << "iterations: " << result.iterations() << '\n';
    return code(ExitCode::kNonConvergence);
  }
  if (!opts.quiet) out << "status: " << to_string(result.status) << '\n';
  out << "l0: " << *result.termination_index << '\n'
      << "w: " << format_point(result.solution) << '\n';
  if (!opts.quiet) {
    out << "interior_slack: " << format_real(interior_slack(problem.b, result.solution))
        << '\n';
  }
  return code(ExitCode::kSuccess);
}

int cmd_check(const ProblemFile& problem, const CommandOptions& opts, std::ostream& out) {
  const CheckStudy study = check_study(problem, opts);
  write_trace(opts.trace_out, study.run.trace);
  if (!opts.quiet) {
    out << "iterations: " << study.run.iterations() << '\n'
        << "min_gap: " << format_real(study.min_gap) << '\n'
        << "violations: " << study.violations.size() << '\n';
  }
  for (const KmViolation& v : study.violations) {
    out << "violation n=" << v.n << " gap=" << format_real(v.gap)
        << " monotone=" << (v.monotone_ok ? "ok" : "violated") << '\n';
  }
  if (study.run.status != RunStatus::kConverged) {
    out << "run did not converge within max_iter\n";
    return code(ExitCode::kNonConvergence);
  }
  return study.passed() ? code(ExitCode::kSuccess) : code(ExitCode::kNonConvergence);
}

int run_command(std::string_view command, const std::filesystem::path& problem_path,
                const CommandOptions& opts, std::ostream& out, std::ostream& err) {
  try {
    const ProblemFile problem = parse_problem(problem_path);
    if (command == "run") return cmd_run(problem, opts, out);
    if (command == "oracle") return cmd_oracle(problem, opts, out);
    if (command == "rate") return cmd_rate(problem, opts, out);
    if (command == "finterm") return cmd_finterm(problem, opts, out);
    if (command == "check") return cmd_check(problem, opts, out);
    err << "error: unknown command '" << command << "'\n";
    return code(ExitCode::kInvalidInput);
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return code(e.code());
  }
}

}  // namespace aamr
