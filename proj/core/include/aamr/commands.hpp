#ifndef AAMR_COMMANDS_HPP_
#define AAMR_COMMANDS_HPP_

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string_view>
#include <vector>

#include "aamr/oracles.hpp"
#include "aamr/problem.hpp"
#include "aamr/rate.hpp"
#include "aamr/solver.hpp"

namespace aamr {

inline constexpr std::int64_t kDefaultOracleMaxIter = 1000000;
inline constexpr double kDefaultOracleTol = 1e-12;
inline constexpr std::int64_t kDefaultRateIterations = 10000;
inline constexpr double kKmGapTol = 1e-8;

// Command-line overrides; unset fields fall back to the problem file, then
// to library defaults.
struct CommandOptions {
  std::optional<double> alpha;
  std::optional<double> beta;
  std::optional<std::int64_t> max_iter;
  std::optional<double> tol;
  std::optional<std::filesystem::path> trace_out;
  std::optional<std::int64_t> n_max;
  std::optional<double> gamma;
  std::optional<double> margin;
  bool quiet = false;
  // Self-test for `check`: perturbs x_1 away from the fixed point so that
  // the verifier must report a violation.
  bool corrupt_trace = false;
};

AamrParams resolve_params(const ProblemFile& problem, const CommandOptions& opts);

struct RateStudy {
  RunResult run;
  RateReport report;
  // Empty when no reference fixed point could be computed (for instance when
  // the constraint qualification fails and convergence is sublinear).
  std::optional<SummabilityCheck> summability;
};

// Runs n_max iterations without the stopping rule and analyses the residuals.
RateStudy rate_study(const ProblemFile& problem, const CommandOptions& opts);

struct KmViolation {
  std::int64_t n = 0;
  double gap = 0.0;
  bool monotone_ok = true;
};

struct CheckStudy {
  Vector fixed_point;
  RunResult run;
  std::vector<KmCheck> checks;
  std::vector<KmViolation> violations;
  double min_gap = 0.0;
  bool passed() const { return violations.empty(); }
};

CheckStudy check_study(const ProblemFile& problem, const CommandOptions& opts);

// Each command writes its report to `out` and returns a process exit code
// (see ExitCode). Library errors propagate as exceptions; run_command maps
// them to exit codes.
int cmd_run(const ProblemFile& problem, const CommandOptions& opts, std::ostream& out);
int cmd_oracle(const ProblemFile& problem, const CommandOptions& opts, std::ostream& out);
int cmd_rate(const ProblemFile& problem, const CommandOptions& opts, std::ostream& out);
int cmd_finterm(const ProblemFile& problem, const CommandOptions& opts, std::ostream& out);
int cmd_check(const ProblemFile& problem, const CommandOptions& opts, std::ostream& out);

// Loads the problem, dispatches `command` (run, oracle, rate, finterm,
// check) and converts errors into diagnostics on `err` plus an exit code.
int run_command(std::string_view command, const std::filesystem::path& problem_path,
                const CommandOptions& opts, std::ostream& out, std::ostream& err);

}  // namespace aamr

#endif  // AAMR_COMMANDS_HPP_
