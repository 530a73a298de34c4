#pragma once

#include <span>
#include <vector>

namespace errsim {

/// Two-sample Kolmogorov-Smirnov statistic sup|F_a - F_b|, tie-safe.
/// Returns a value in [0, 1]. Throws std::invalid_argument on empty input.
double ks_statistic(std::span<const double> a, std::span<const double> b);

struct ErrorStats {
  double mean = 0.0;
  double stddev = 0.0;  // sample standard deviation
  double median = 0.0;
  double max = 0.0;
};

ErrorStats summarize(std::span<const double> values);

struct Histogram {
  double lo = 0.0;
  double hi = 0.0;
  std::vector<std::size_t> counts;
};

/// Fixed-width histogram over [lo, hi]; values outside land in the end bins.
Histogram histogram(std::span<const double> values, double lo, double hi, int bins);

}  // namespace errsim
