#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "dhdiag/diag/options.hpp"
#include "dhdiag/diag/status.hpp"
#include "dhdiag/stats/anomaly.hpp"
#include "dhdiag/stats/medcouple.hpp"
#include "dhdiag/stats/robust.hpp"
#include "dhdiag/store/reading_table.hpp"

namespace dhdiag::diag {

// null_count + structurally_missing_count + non_null_count == expected_count
struct NullAccounting {
  std::size_t null_count = 0;                  // present rows with a null cell
  std::size_t structurally_missing_count = 0;  // expected rows that are absent
  std::size_t non_null_count = 0;
  std::size_t expected_count = 0;
  double null_rate = 0.0;  // (null + structural) / expected; 0 when nothing is expected
};

struct ColumnKpi {
  std::string column;
  std::string unit;
  std::optional<std::string> meter_id;  // empty: all meters

  std::optional<stats::RobustSummary> summary;  // empty when every cell is missing
  stats::AnomalyCount anomaly;
  QualityStatus anomaly_status = QualityStatus::kNone;
  NullAccounting nulls;
  QualityStatus null_status = QualityStatus::kNone;
  std::optional<stats::MedcoupleResult> skewness;
  QualityStatus skewness_status = QualityStatus::kNone;
  std::optional<GaugeSpec> mean_gauge;    // on the [min, max] scale of the scope
  std::optional<GaugeSpec> median_gauge;
  std::size_t rule_violation_count = 0;
  std::vector<std::string> suggested_actions;

  // Worst of every status above, None when none is defined.
  QualityStatus overall_status() const noexcept;
};

// Non-null values of a column, all meters or one meter, in row order.
// Throws UnknownColumnError / UnknownMeterError.
std::vector<double> column_values(const store::ReadingTable& table, std::string_view column,
                                  std::optional<std::string_view> meter_id = std::nullopt);

NullAccounting null_accounting(const store::ReadingTable& table, std::string_view column,
                               std::optional<std::string_view> meter_id, store::WindowMode mode);

ColumnKpi column_kpi(const store::ReadingTable& table, std::string_view column,
                     std::optional<std::string_view> meter_id = std::nullopt,
                     const DiagnosticsOptions& options = {});

// Every column, all meters, computed in parallel. Order follows table.columns().
std::vector<ColumnKpi> column_kpis(const store::ReadingTable& table, const DiagnosticsOptions& options = {});

}  // namespace dhdiag::diag
