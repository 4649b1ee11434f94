#include "dhdiag/diag/actions.hpp"

#include <algorithm>

namespace dhdiag::diag {

namespace {

constexpr std::array<DiagnosticMapping, 8> kMappings{{
    {DiagnosticView::kLinePlot, "Time-Series Line Plot", "Sudden spikes, drops, and missing values",
     "Visual inspection (breaks or discontinuities)", "Investigate anomalies, impute, or remove extreme values"},
    {DiagnosticView::kBoxPlot, "Box Plot", "Outliers, skewed distributions", "Mean vs. Median, Quartiles",
     "Confirm and flag outliers, assess distributional bias"},
    {DiagnosticView::kHistogram, "Histogram", "Extreme values, non-physical readings", "Frequency distribution",
     "Clip or correct invalid values (e.g., negative energy)"},
    {DiagnosticView::kHeatmap, "Heatmap (Time vs. Time)", "Systemic missing patterns, temporal dropout",
     "Percentage of null values", "Identify periods with high loss; flag or impute"},
    {DiagnosticView::kGauges, "KPI Gauges (e.g., Anomaly, Nulls)",
     "Data spread, presence of missing or extreme values", "Anomaly, Skewness, Null %",
     "Determine data health; prioritize columns/segments for review"},
    {DiagnosticView::kDataGrid, "Data Grid (Tabular View)", "Unexpected meter behavior", "All mentioned, e.g., Null %",
     "Filter and isolate problematic meters for further inspection"},
    {DiagnosticView::kScatter, "Scatter Plot (Dynamic)", "Abnormal inter-feature relationships",
     "Visual deviation from expected correlations", "Identify and exclude implausible points or faulty sensors"},
    {DiagnosticView::kCorrelation, "Correlation Matrix", "Lack of correlation, variable redundancy, or error",
     "Pearson/Spearman correlation", "Validate expected relationships; detect systemic anomalies"},
}};

bool flagged(QualityStatus s) { return s == QualityStatus::kYellow || s == QualityStatus::kRed; }

}  // namespace

const std::array<DiagnosticMapping, 8>& diagnostic_mappings() noexcept { return kMappings; }

const DiagnosticMapping& mapping_for(DiagnosticView view) noexcept {
  return *std::find_if(kMappings.begin(), kMappings.end(), [&](const auto& m) { return m.view == view; });
}

std::vector<std::string> suggested_actions(const KpiFindings& f) {
  std::array<bool, kMappings.size()> want{};
  auto mark = [&](DiagnosticView v) { want[static_cast<std::size_t>(v)] = true; };
  if (flagged(f.anomaly)) {
    mark(DiagnosticView::kGauges);
    mark(DiagnosticView::kLinePlot);
  }
  if (flagged(f.skewness)) {
    mark(DiagnosticView::kGauges);
    mark(DiagnosticView::kBoxPlot);
  }
  if (flagged(f.nulls)) {
    mark(DiagnosticView::kGauges);
    mark(DiagnosticView::kHeatmap);
  }
  if (f.rule_violations > 0) mark(DiagnosticView::kHistogram);

  std::vector<std::string> out;
  for (std::size_t i = 0; i < kMappings.size(); ++i)
    if (want[i]) out.emplace_back(kMappings[i].action);
  return out;
}

}  // namespace dhdiag::diag
