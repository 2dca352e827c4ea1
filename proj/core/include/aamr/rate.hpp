#ifndef AAMR_RATE_HPP_
#define AAMR_RATE_HPP_

#include <cstdint>
#include <span>
#include <vector>

#include "aamr/solver.hpp"

namespace aamr {

// Slope threshold for the log-log fit of r(x_n) against n.
inline constexpr double kRateSlopeThreshold = -0.4;

struct RateWindow {
  std::int64_t n = 0;                // window is [n, 2n]
  double max_scaled_residual = 0.0;  // max sqrt(k) r(x_k) over the window
};

// Hypotheses of the summability lemma behind the rate, checked on
// a_n = ||(I - R)(x_n)||^2.
struct SummabilityCheck {
  bool nonnegative = true;
  bool monotone = true;          // sqrt(a_{n+1}) <= sqrt(a_n) + 1e-10
  bool partial_sums_bounded = true;
  double max_partial_sum = 0.0;  // alpha (1 - alpha) sum_{j<=k} a_j, max over k
  double bound = 0.0;            // ||x_0 - u||^2 + 1e-6
  bool ok() const { return nonnegative && monotone && partial_sums_bounded; }
};

struct RateReport {
  std::vector<RateWindow> windows;  // sorted by n
  // Least-squares slope of log r(x_n) vs log n over the tail
  // [last / 10, last], where `last` is the final index with r above the
  // noise floor; -inf when fewer than two residuals exceed the floor.
  double fitted_slope = 0.0;
  bool windows_decreasing = false;
  bool slope_ok = false;
  bool verdict = false;
};

// Window starts are 100, 1000, ... (1, 10, ... for traces shorter than 200)
// as long as the whole window [N, 2N] lies inside the trace. Successive
// window maxima must strictly decrease; two exactly-zero maxima count as
// decreasing. Residuals <= noise_floor count as zero in the windows and are
// excluded from the slope fit.
RateReport rate_report(std::span<const IterationRecord> trace,
                       double noise_floor);

// Uses fp_residual = alpha ||(I - R)(x_n)||, so a_n = (fp_n / alpha)^2.
SummabilityCheck check_summability(std::span<const IterationRecord> trace,
                                   double alpha, double x0_to_fixed_sq);

}  // namespace aamr

#endif  // AAMR_RATE_HPP_
