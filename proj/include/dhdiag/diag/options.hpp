#pragma once

#include <vector>

#include "dhdiag/stats/anomaly.hpp"
#include "dhdiag/store/activity_mode.hpp"
#include "dhdiag/store/schema.hpp"

namespace dhdiag::diag {

struct DiagnosticsOptions {
  store::WindowMode window_mode = store::WindowMode::kFirstToLast;
  std::vector<store::BoundRule> rules = store::default_rules();
  double anomaly_threshold = stats::kDefaultAnomalyThreshold;

  static DiagnosticsOptions from_schema(const store::IngestSchema& schema) {
    return {schema.window_mode, schema.rules, stats::kDefaultAnomalyThreshold};
  }
};

}  // namespace dhdiag::diag
