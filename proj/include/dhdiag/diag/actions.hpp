#pragma once

#include <array>
#include <string>
#include <string_view>
#include <vector>

#include "dhdiag/diag/status.hpp"

namespace dhdiag::diag {

enum class DiagnosticView {
  kLinePlot,
  kBoxPlot,
  kHistogram,
  kHeatmap,
  kGauges,
  kDataGrid,
  kScatter,
  kCorrelation,
};

struct DiagnosticMapping {
  DiagnosticView view;
  std::string_view visualization;
  std::string_view issue;
  std::string_view metric;
  std::string_view action;
};

// The visual-diagnostics catalog: which view exposes which issue and what to do about it.
const std::array<DiagnosticMapping, 8>& diagnostic_mappings() noexcept;
const DiagnosticMapping& mapping_for(DiagnosticView view) noexcept;

// Findings on a column KPI that carry follow-up advice.
struct KpiFindings {
  QualityStatus anomaly = QualityStatus::kNone;
  QualityStatus nulls = QualityStatus::kNone;
  QualityStatus skewness = QualityStatus::kNone;
  std::size_t rule_violations = 0;
};

// Action text for every non-green status (and for physical-rule violations),
// deduplicated, in catalog order. Empty when everything is green.
std::vector<std::string> suggested_actions(const KpiFindings& findings);

}  // namespace dhdiag::diag
