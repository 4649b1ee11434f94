#include "dhdiag/diag/dataset.hpp"

namespace dhdiag::diag {

Dataset::Dataset(store::ReadingTable table, DiagnosticsOptions options)
    : table_(std::move(table)), options_(std::move(options)) {}

Dataset::ScopeKey Dataset::scope_key(std::string_view column, std::optional<std::string_view> meter) const {
  (void)table_.column(column);
  if (meter) (void)table_.meter(*meter);
  return {std::string(column), meter ? std::string(*meter) : std::string()};
}

namespace {
std::optional<std::string_view> meter_of(const std::string& key) {
  if (key.empty()) return std::nullopt;
  return key;
}
}  // namespace

std::shared_ptr<const ColumnKpi> Dataset::kpi(std::string_view column, std::optional<std::string_view> meter) {
  const auto key = scope_key(column, meter);
  return kpis_.get(key, [&] { return column_kpi(table_, key.first, meter_of(key.second), options_); });
}

std::shared_ptr<const std::optional<stats::BoxplotStats>> Dataset::boxplot(std::string_view column,
                                                                           std::optional<std::string_view> meter) {
  const auto key = scope_key(column, meter);
  return boxplots_.get(key, [&] {
    return stats::boxplot_stats(stats::SortedSample(column_values(table_, key.first, meter_of(key.second))));
  });
}

std::shared_ptr<const std::optional<stats::HistogramStats>> Dataset::histogram(
    std::string_view column, std::optional<std::string_view> meter, std::size_t bins) {
  const auto scope = scope_key(column, meter);
  return histograms_.get({scope.first, scope.second, bins}, [&] {
    return stats::histogram(column_values(table_, scope.first, meter_of(scope.second)), bins);
  });
}

std::shared_ptr<const HeatmapMatrix> Dataset::missing_value_heatmap(std::string_view column, bool normalize) {
  (void)table_.column(column);
  return heatmaps_.get({std::string(column), normalize}, [&] {
    return diag::missing_value_heatmap(table_, column, normalize, options_.window_mode);
  });
}

std::shared_ptr<const HeatmapMatrix> Dataset::missing_meter_heatmap(bool normalize) {
  // Column names are never empty, so "" keys the meter map.
  return heatmaps_.get({std::string(), normalize},
                       [&] { return diag::missing_meter_heatmap(table_, normalize, options_.window_mode); });
}

std::shared_ptr<const MissingTimestamps> Dataset::missing_timestamps() {
  return missing_timestamps_.get(0, [&] { return diag::missing_timestamps(table_); });
}

std::shared_ptr<const RuleViolationReport> Dataset::violations() {
  return violations_.get(0, [&] { return rule_violations(table_, options_.rules); });
}

std::shared_ptr<const CorrelationMatrix> Dataset::correlation(CorrelationMethod method) {
  return correlations_.get(method, [&] { return correlation_matrix(table_, method); });
}

std::shared_ptr<const MeterStatsTable> Dataset::meter_stats() {
  return meter_stats_.get(0, [&] { return compute_meter_stats(table_, options_); });
}

}  // namespace dhdiag::diag
