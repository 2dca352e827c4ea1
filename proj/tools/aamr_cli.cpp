// Command-line front end: aamr <run|oracle|rate|finterm|check> --problem FILE

#include <CLI11.hpp>

#include <iostream>
#include <string>

#include "aamr/commands.hpp"

namespace {

void add_common(CLI::App* cmd, std::string& problem, aamr::CommandOptions& opts) {
  cmd->add_option("--problem", problem, "Problem file (JSON)")->required();
  cmd->add_option("--alpha", opts.alpha, "Averaging parameter in (0,1)");
  cmd->add_option("--beta", opts.beta, "Reflection parameter in (0,1)");
  cmd->add_option("--max-iter", opts.max_iter, "Iteration budget");
  cmd->add_option("--tol", opts.tol, "Stopping tolerance");
  cmd->add_option("--trace-out", opts.trace_out, "Write the iteration trace as CSV");
  cmd->add_flag("--quiet", opts.quiet, "Print only the result line");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Best approximation onto A∩B by averaged alternating modified reflections"};
  app.require_subcommand(1);

  std::string problem;
  aamr::CommandOptions opts;

  auto* run = app.add_subcommand("run", "Solve the problem and print the shadow solution");
  add_common(run, problem, opts);

  auto* oracle = app.add_subcommand("oracle", "Solve with Dykstra's algorithm");
  add_common(oracle, problem, opts);

  auto* rate = app.add_subcommand("rate", "Residual-rate report over n-max iterations");
  add_common(rate, problem, opts);
  rate->add_option("--n-max", opts.n_max, "Number of iterations (default 10000)");

  auto* finterm = app.add_subcommand("finterm", "Shifted-cone scheme with finite termination");
  add_common(finterm, problem, opts);
  finterm->add_option("--gamma", opts.gamma, "Shift length along e");
  finterm->add_option("--margin", opts.margin, "Interior slack required to stop");

  auto* check = app.add_subcommand("check", "Verify the per-iteration KM inequalities");
  add_common(check, problem, opts);
  check->add_flag("--corrupt-trace", opts.corrupt_trace,
                  "Perturb x_1 before verification (self-test)")
      ->group("");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : static_cast<int>(aamr::ExitCode::kInvalidInput);
  }

  const std::string command = app.get_subcommands().front()->get_name();
  return aamr::run_command(command, problem, opts, std::cout, std::cerr);
}
