#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "dhdiag/stats/robust.hpp"

namespace dhdiag::stats {

inline constexpr double kMadConsistency = 0.6745;
inline constexpr double kMeanAbsDevConsistency = 1.253314;
inline constexpr double kDefaultAnomalyThreshold = 3.5;

// Modified z-score M = 0.6745 (x - median) / MAD.
//
// When MAD is zero the scale falls back to 1.253314 * MeanAD and the scorer
// reports a degenerate scale. When MeanAD is zero as well every score is 0.
class ModifiedZScorer {
 public:
  ModifiedZScorer(double median, double mad, double mean_abs_dev) noexcept;
  explicit ModifiedZScorer(const RobustSummary& summary) noexcept
      : ModifiedZScorer(summary.median, summary.mad, summary.mean_abs_dev) {}

  double score(double x) const noexcept;
  bool degenerate_scale() const noexcept { return degenerate_; }

 private:
  double median_;
  double mad_;
  double fallback_scale_;
  bool degenerate_;
};

struct AnomalyReport {
  std::vector<double> scores;  // aligned with the input order
  std::vector<bool> flags;     // |score| > threshold
  std::size_t count = 0;
  std::size_t anomaly_count = 0;
  double anomaly_rate = 0.0;
  double threshold = kDefaultAnomalyThreshold;
  bool degenerate_scale = false;
};

// Same accounting as AnomalyReport without the per-point vectors.
struct AnomalyCount {
  std::size_t count = 0;
  std::size_t anomaly_count = 0;
  double anomaly_rate = 0.0;
  double threshold = kDefaultAnomalyThreshold;
  bool degenerate_scale = false;
};

// Throws std::invalid_argument unless threshold > 0.
AnomalyReport modified_z_scores(std::span<const double> sample,
                                double threshold = kDefaultAnomalyThreshold);

AnomalyCount count_anomalies(std::span<const double> sample, const RobustSummary& summary,
                             double threshold = kDefaultAnomalyThreshold);

}  // namespace dhdiag::stats
