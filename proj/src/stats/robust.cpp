#include "dhdiag/stats/robust.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

namespace dhdiag::stats {

double median_sorted(std::span<const double> sorted) {
  if (sorted.empty()) throw std::invalid_argument("median of empty sample");
  const std::size_t n = sorted.size();
  const std::size_t mid = n / 2;
  if (n % 2 == 1) return sorted[mid];
  return 0.5 * (sorted[mid - 1] + sorted[mid]);
}

double quantile_sorted(std::span<const double> sorted, double p) {
  if (sorted.empty()) throw std::invalid_argument("quantile of empty sample");
  p = std::clamp(p, 0.0, 1.0);
  const double pos = static_cast<double>(sorted.size() - 1) * p;  // 0-based
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
  const double frac = pos - static_cast<double>(lo);
  if (frac == 0.0) return sorted[lo];
  return sorted[lo] + (sorted[hi] - sorted[lo]) * frac;
}

namespace {

// k-th smallest (0-based) absolute deviation from m over an ascending range.
// The deviations form two ascending runs, m - x below the split and x - m
// above it, so selection is a binary search over how many come from the lower run.
double kth_abs_deviation(std::span<const double> sorted, double m, std::size_t k) {
  const std::size_t split = static_cast<std::size_t>(std::lower_bound(sorted.begin(), sorted.end(), m) - sorted.begin());
  const std::size_t na = split;
  const std::size_t nb = sorted.size() - split;
  auto a = [&](std::size_t j) { return m - sorted[split - 1 - j]; };
  auto b = [&](std::size_t j) { return sorted[split + j] - m; };
  const std::size_t take = k + 1;
  std::size_t lo = take > nb ? take - nb : 0;
  std::size_t hi = std::min(take, na);
  while (lo < hi) {
    const std::size_t i = lo + (hi - lo) / 2;  // elements from a
    if (a(i) < b(take - i - 1))
      lo = i + 1;
    else
      hi = i;
  }
  const std::size_t i = lo;
  if (i == 0) return b(take - 1);
  if (i == take) return a(take - 1);
  return std::max(a(i - 1), b(take - i - 1));
}

RobustSummary summarize_sorted(std::span<const double> sorted) {
  RobustSummary out;
  out.count = sorted.size();
  out.min = sorted.front();
  out.max = sorted.back();
  out.median = median_sorted(sorted);

  double sum = 0.0;
  double abs_dev_sum = 0.0;
  for (double x : sorted) {
    sum += x;
    abs_dev_sum += std::fabs(x - out.median);
  }
  const auto n = static_cast<double>(sorted.size());
  out.mean = sum / n;
  out.mean_abs_dev = abs_dev_sum / n;

  const std::size_t mid = sorted.size() / 2;
  double mad = kth_abs_deviation(sorted, out.median, mid);
  if (sorted.size() % 2 == 0) mad = 0.5 * (mad + kth_abs_deviation(sorted, out.median, mid - 1));
  out.mad = mad;
  return out;
}

}  // namespace

std::optional<RobustSummary> robust_summary(std::span<const double> sample) {
  if (sample.empty()) return std::nullopt;
  return summarize_sorted(SortedSample(sample).values());
}

std::optional<RobustSummary> robust_summary(const SortedSample& sample) {
  if (sample.empty()) return std::nullopt;
  return summarize_sorted(sample.values());
}

}  // namespace dhdiag::stats
