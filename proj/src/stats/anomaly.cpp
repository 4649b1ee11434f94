#include "dhdiag/stats/anomaly.hpp"

#include <cmath>
#include <stdexcept>

namespace dhdiag::stats {

ModifiedZScorer::ModifiedZScorer(double median, double mad, double mean_abs_dev) noexcept
    : median_(median),
      mad_(mad),
      fallback_scale_(kMeanAbsDevConsistency * mean_abs_dev),
      degenerate_(!(mad > 0.0)) {}

double ModifiedZScorer::score(double x) const noexcept {
  if (!degenerate_) return kMadConsistency * (x - median_) / mad_;
  if (fallback_scale_ > 0.0) return (x - median_) / fallback_scale_;
  return 0.0;
}

namespace {

void check_threshold(double threshold) {
  if (!(threshold > 0.0) || !std::isfinite(threshold))
    throw std::invalid_argument("anomaly threshold must be a positive finite number");
}

}  // namespace

AnomalyReport modified_z_scores(std::span<const double> sample, double threshold) {
  check_threshold(threshold);
  AnomalyReport report;
  report.threshold = threshold;
  report.count = sample.size();
  const auto summary = robust_summary(sample);
  if (!summary) return report;

  const ModifiedZScorer scorer(*summary);
  report.degenerate_scale = scorer.degenerate_scale();
  report.scores.reserve(sample.size());
  report.flags.reserve(sample.size());
  for (double x : sample) {
    const double m = scorer.score(x);
    const bool flagged = std::fabs(m) > threshold;
    report.scores.push_back(m);
    report.flags.push_back(flagged);
    report.anomaly_count += flagged ? 1 : 0;
  }
  report.anomaly_rate =
      static_cast<double>(report.anomaly_count) / static_cast<double>(report.count);
  return report;
}

AnomalyCount count_anomalies(std::span<const double> sample, const RobustSummary& summary,
                             double threshold) {
  check_threshold(threshold);
  AnomalyCount out;
  out.threshold = threshold;
  out.count = sample.size();
  if (sample.empty()) return out;

  const ModifiedZScorer scorer(summary);
  out.degenerate_scale = scorer.degenerate_scale();
  for (double x : sample) out.anomaly_count += std::fabs(scorer.score(x)) > threshold ? 1 : 0;
  out.anomaly_rate = static_cast<double>(out.anomaly_count) / static_cast<double>(out.count);
  return out;
}

}  // namespace dhdiag::stats
