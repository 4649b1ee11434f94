#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <tuple>

#include "dhdiag/diag/coverage.hpp"
#include "dhdiag/diag/kpi.hpp"
#include "dhdiag/diag/memo.hpp"
#include "dhdiag/diag/meter_stats.hpp"
#include "dhdiag/diag/options.hpp"
#include "dhdiag/diag/relations.hpp"
#include "dhdiag/diag/violations.hpp"
#include "dhdiag/stats/distribution.hpp"
#include "dhdiag/store/reading_table.hpp"

namespace dhdiag::diag {

// An immutable table plus memoized diagnostics over it. Safe for concurrent use.
// Column and meter arguments are validated before any computation and throw
// UnknownColumnError / UnknownMeterError.
class Dataset {
 public:
  Dataset(store::ReadingTable table, DiagnosticsOptions options);

  const store::ReadingTable& table() const noexcept { return table_; }
  const DiagnosticsOptions& options() const noexcept { return options_; }

  std::shared_ptr<const ColumnKpi> kpi(std::string_view column, std::optional<std::string_view> meter = {});
  std::shared_ptr<const std::optional<stats::BoxplotStats>> boxplot(std::string_view column,
                                                                    std::optional<std::string_view> meter = {});
  std::shared_ptr<const std::optional<stats::HistogramStats>> histogram(std::string_view column,
                                                                        std::optional<std::string_view> meter,
                                                                        std::size_t bins);
  std::shared_ptr<const HeatmapMatrix> missing_value_heatmap(std::string_view column, bool normalize);
  std::shared_ptr<const HeatmapMatrix> missing_meter_heatmap(bool normalize);
  std::shared_ptr<const MissingTimestamps> missing_timestamps();
  std::shared_ptr<const RuleViolationReport> violations();
  std::shared_ptr<const CorrelationMatrix> correlation(CorrelationMethod method);
  std::shared_ptr<const MeterStatsTable> meter_stats();

 private:
  using ScopeKey = std::pair<std::string, std::string>;  // column, meter ("" for all)
  ScopeKey scope_key(std::string_view column, std::optional<std::string_view> meter) const;

  store::ReadingTable table_;
  DiagnosticsOptions options_;

  SingleFlightMemo<ScopeKey, ColumnKpi> kpis_;
  SingleFlightMemo<ScopeKey, std::optional<stats::BoxplotStats>> boxplots_;
  SingleFlightMemo<std::tuple<std::string, std::string, std::size_t>, std::optional<stats::HistogramStats>>
      histograms_;
  SingleFlightMemo<std::pair<std::string, bool>, HeatmapMatrix> heatmaps_;
  SingleFlightMemo<int, MissingTimestamps> missing_timestamps_;
  SingleFlightMemo<int, RuleViolationReport> violations_;
  SingleFlightMemo<CorrelationMethod, CorrelationMatrix> correlations_;
  SingleFlightMemo<int, MeterStatsTable> meter_stats_;
};

}  // namespace dhdiag::diag
