#include "aamr/rate.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace aamr {

RateReport rate_report(std::span<const IterationRecord> trace,
                       double noise_floor) {
  RateReport report;
  const auto size = static_cast<std::int64_t>(trace.size());

  const std::int64_t first_window = size > 200 ? 100 : 1;
  for (std::int64_t n = first_window; 2 * n < size; n *= 10) {
    double peak = 0.0;
    for (std::int64_t k = n; k <= 2 * n; ++k) {
      const IterationRecord& rec = trace[static_cast<std::size_t>(k)];
      if (rec.r_residual > noise_floor) peak = std::max(peak, rec.scaled_residual);
    }
    report.windows.push_back({n, peak});
  }

  report.windows_decreasing = true;
  for (std::size_t i = 1; i < report.windows.size(); ++i) {
    const double prev = report.windows[i - 1].max_scaled_residual;
    const double cur = report.windows[i].max_scaled_residual;
    const bool both_zero = prev == 0.0 && cur == 0.0;
    if (!(cur < prev) && !both_zero) report.windows_decreasing = false;
  }

  std::int64_t last = -1;
  for (std::int64_t k = size - 1; k >= 1; --k) {
    if (trace[static_cast<std::size_t>(k)].r_residual > noise_floor) {
      last = k;
      break;
    }
  }
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  std::int64_t count = 0;
  if (last >= 1) {
    for (std::int64_t k = std::max<std::int64_t>(1, last / 10); k <= last; ++k) {
      const double r = trace[static_cast<std::size_t>(k)].r_residual;
      if (!(r > noise_floor)) continue;
      const double lx = std::log(static_cast<double>(k));
      const double ly = std::log(r);
      sx += lx;
      sy += ly;
      sxx += lx * lx;
      sxy += lx * ly;
      ++count;
    }
  }
  const double denom = static_cast<double>(count) * sxx - sx * sx;
  if (count < 2 || denom <= 0.0) {
    report.fitted_slope = -std::numeric_limits<double>::infinity();
  } else {
    report.fitted_slope = (static_cast<double>(count) * sxy - sx * sy) / denom;
  }
  report.slope_ok = report.fitted_slope <= kRateSlopeThreshold;
  report.verdict = report.windows_decreasing && report.slope_ok;
  return report;
}

SummabilityCheck check_summability(std::span<const IterationRecord> trace,
                                   double alpha, double x0_to_fixed_sq) {
  SummabilityCheck check;
  check.bound = x0_to_fixed_sq + 1e-6;
  const double weight = alpha * (1.0 - alpha);
  double partial = 0.0;
  double prev_defect = std::numeric_limits<double>::infinity();
  for (const auto& rec : trace) {
    const double defect = rec.fp_residual / alpha;
    const double a_n = defect * defect;
    if (!(a_n >= 0.0)) check.nonnegative = false;
    if (defect > prev_defect + 1e-10) check.monotone = false;
    partial += weight * a_n;
    check.max_partial_sum = std::max(check.max_partial_sum, partial);
    prev_defect = defect;
  }
  check.partial_sums_bounded = check.max_partial_sum <= check.bound;
  return check;
}

}  // namespace aamr
