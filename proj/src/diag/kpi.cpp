#include "dhdiag/diag/kpi.hpp"

#include "dhdiag/diag/actions.hpp"
#include "dhdiag/diag/parallel.hpp"
#include "dhdiag/stats/sample.hpp"
#include "dhdiag/store/activity.hpp"

namespace dhdiag::diag {

QualityStatus ColumnKpi::overall_status() const noexcept {
  QualityStatus s = worst(worst(anomaly_status, null_status), skewness_status);
  if (mean_gauge) s = worst(s, mean_gauge->status);
  if (median_gauge) s = worst(s, median_gauge->status);
  return s;
}

std::vector<double> column_values(const store::ReadingTable& table, std::string_view column,
                                  std::optional<std::string_view> meter_id) {
  const auto& col = table.column(column);
  std::vector<double> out;
  if (meter_id) {
    const auto rows = table.meter_rows(table.meter(*meter_id));
    out.reserve(rows.size());
    for (const auto r : rows)
      if (col.valid[r]) out.push_back(col.values[r]);
  } else {
    out.reserve(table.row_count() - col.null_count());
    for (std::size_t r = 0; r < table.row_count(); ++r)
      if (col.valid[r]) out.push_back(col.values[r]);
  }
  return out;
}

NullAccounting null_accounting(const store::ReadingTable& table, std::string_view column,
                               std::optional<std::string_view> meter_id, store::WindowMode mode) {
  const auto& col = table.column(column);
  NullAccounting n;
  std::size_t present = 0;
  if (meter_id) {
    const auto m = table.meter(*meter_id);
    const auto rows = table.meter_rows(m);
    present = rows.size();
    for (const auto r : rows) n.null_count += col.valid[r] ? 0 : 1;
    const auto first = table.row_times()[rows.front()];
    const auto end = mode == store::WindowMode::kFirstToDatasetEnd ? *table.last_time()
                                                                     : table.row_times()[rows.back()];
    n.expected_count = static_cast<std::size_t>((end - first).count()) + 1;
  } else {
    present = table.row_count();
    n.null_count = col.null_count();
    for (const auto& a : store::meter_activity(table, mode)) n.expected_count += a.expected_count;
  }
  n.structurally_missing_count = n.expected_count - present;
  n.non_null_count = present - n.null_count;
  n.null_rate = n.expected_count == 0
                    ? 0.0
                    : static_cast<double>(n.null_count + n.structurally_missing_count) /
                          static_cast<double>(n.expected_count);
  return n;
}

ColumnKpi column_kpi(const store::ReadingTable& table, std::string_view column,
                     std::optional<std::string_view> meter_id, const DiagnosticsOptions& options) {
  const auto& col = table.column(column);
  ColumnKpi k;
  k.column = col.name;
  k.unit = col.unit;
  if (meter_id) k.meter_id = std::string(*meter_id);

  k.nulls = null_accounting(table, column, meter_id, options.window_mode);
  k.null_status = k.nulls.expected_count == 0 ? QualityStatus::kNone : null_status(k.nulls.null_rate);

  const stats::SortedSample sample(column_values(table, column, meter_id));
  k.anomaly.threshold = options.anomaly_threshold;
  for (const auto& rule : options.rules)
    if (rule.column == k.column)
      for (const double v : sample.values()) k.rule_violation_count += rule.violated_by(v) ? 1 : 0;

  k.summary = stats::robust_summary(sample);
  if (k.summary) {
    k.anomaly = stats::count_anomalies(sample.values(), *k.summary, options.anomaly_threshold);
    k.anomaly_status = anomaly_status(k.anomaly.anomaly_rate);
    k.skewness = stats::medcouple(sample);
    k.skewness_status = k.skewness->degenerate ? QualityStatus::kNone : skewness_status(k.skewness->value);
    k.mean_gauge = gauge_status(k.summary->mean, k.summary->min, k.summary->max);
    k.median_gauge = gauge_status(k.summary->median, k.summary->min, k.summary->max);
  }
  k.suggested_actions =
      suggested_actions({k.anomaly_status, k.null_status, k.skewness_status, k.rule_violation_count});
  return k;
}

std::vector<ColumnKpi> column_kpis(const store::ReadingTable& table, const DiagnosticsOptions& options) {
  std::vector<ColumnKpi> out(table.columns().size());
  parallel_for(out.size(), [&](std::size_t i) { out[i] = column_kpi(table, table.columns()[i].name, {}, options); });
  return out;
}

}  // namespace dhdiag::diag
