#pragma once

#include <cstddef>
#include <optional>
#include <span>

#include "dhdiag/stats/sample.hpp"

namespace dhdiag::stats {

struct RobustSummary {
  std::size_t count = 0;
  double mean = 0.0;
  double median = 0.0;
  double mad = 0.0;           // median of |x - median|
  double mean_abs_dev = 0.0;  // mean of |x - median|
  double min = 0.0;
  double max = 0.0;
};

// Median of an ascending, non-empty range; even counts average the two middle values.
double median_sorted(std::span<const double> sorted);

// Quantile by linear interpolation between order statistics at the 1-based
// position 1 + (n - 1) * p. Range must be ascending and non-empty.
double quantile_sorted(std::span<const double> sorted, double p);

// Absent for an empty sample.
std::optional<RobustSummary> robust_summary(std::span<const double> sample);
std::optional<RobustSummary> robust_summary(const SortedSample& sample);

}  // namespace dhdiag::stats
