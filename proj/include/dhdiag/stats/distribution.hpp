#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "dhdiag/stats/sample.hpp"

namespace dhdiag::stats {

inline constexpr std::size_t kDefaultHistogramBins = 50;
inline constexpr double kWhiskerFactor = 1.5;

struct BoxplotStats {
  double min = 0.0;
  double q1 = 0.0;
  double median = 0.0;
  double q3 = 0.0;
  double max = 0.0;
  double mean = 0.0;
  double iqr = 0.0;
  double lower_whisker = 0.0;
  double upper_whisker = 0.0;
  std::size_t outlier_count = 0;
};

struct HistogramStats {
  std::vector<double> bin_edges;     // counts.size() + 1 entries
  std::vector<std::size_t> counts;
  std::size_t underflow = 0;
  std::size_t overflow = 0;
};

// Whiskers sit at the most extreme points inside [q1 - 1.5 iqr, q3 + 1.5 iqr].
std::optional<BoxplotStats> boxplot_stats(std::span<const double> sample);
std::optional<BoxplotStats> boxplot_stats(const SortedSample& sample);

// Uniform bins over [min, max]; bins are [lo, hi) except the last, which also
// holds max. A constant sample collapses to one bin. Absent for an empty
// sample; throws std::invalid_argument when bins == 0.
std::optional<HistogramStats> histogram(std::span<const double> sample,
                                        std::size_t bins = kDefaultHistogramBins);

}  // namespace dhdiag::stats
