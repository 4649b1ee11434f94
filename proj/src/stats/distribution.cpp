#include "dhdiag/stats/distribution.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

#include "dhdiag/stats/robust.hpp"

namespace dhdiag::stats {

std::optional<BoxplotStats> boxplot_stats(const SortedSample& sample) {
  if (sample.empty()) return std::nullopt;
  const auto v = sample.values();

  BoxplotStats out;
  out.min = v.front();
  out.max = v.back();
  out.q1 = quantile_sorted(v, 0.25);
  out.median = median_sorted(v);
  out.q3 = quantile_sorted(v, 0.75);
  out.iqr = out.q3 - out.q1;
  out.mean = std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());

  const double lower_fence = out.q1 - kWhiskerFactor * out.iqr;
  const double upper_fence = out.q3 + kWhiskerFactor * out.iqr;
  const auto lo = std::lower_bound(v.begin(), v.end(), lower_fence);
  const auto hi = std::upper_bound(v.begin(), v.end(), upper_fence);
  // q1 and q3 always lie inside the fences, so [lo, hi) is never empty.
  out.lower_whisker = *lo;
  out.upper_whisker = *(hi - 1);
  out.outlier_count = static_cast<std::size_t>((lo - v.begin()) + (v.end() - hi));
  return out;
}

std::optional<BoxplotStats> boxplot_stats(std::span<const double> sample) {
  return boxplot_stats(SortedSample(sample));
}

std::optional<HistogramStats> histogram(std::span<const double> sample, std::size_t bins) {
  if (bins == 0) throw std::invalid_argument("histogram: bins must be positive");
  if (sample.empty()) return std::nullopt;

  const auto [min_it, max_it] = std::minmax_element(sample.begin(), sample.end());
  const double lo = *min_it;
  const double hi = *max_it;

  HistogramStats out;
  if (!(lo < hi)) {
    out.bin_edges = {lo, hi};
    out.counts = {sample.size()};
    return out;
  }

  out.bin_edges.resize(bins + 1);
  const double width = (hi - lo) / static_cast<double>(bins);
  for (std::size_t i = 0; i < bins; ++i) out.bin_edges[i] = lo + width * static_cast<double>(i);
  out.bin_edges[bins] = hi;
  out.counts.assign(bins, 0);

  const auto& edges = out.bin_edges;
  for (double x : sample) {
    auto idx = static_cast<std::size_t>((x - lo) / width);
    idx = std::min(idx, bins - 1);
    // settle rounding against the stored edges
    while (idx > 0 && x < edges[idx]) --idx;
    while (idx + 1 < bins && x >= edges[idx + 1]) ++idx;
    ++out.counts[idx];
  }
  return out;
}

}  // namespace dhdiag::stats
