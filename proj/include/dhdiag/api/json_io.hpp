#pragma once

#include <nlohmann/json.hpp>

#include "dhdiag/diag/actions.hpp"
#include "dhdiag/diag/coverage.hpp"
#include "dhdiag/diag/kpi.hpp"
#include "dhdiag/diag/meter_stats.hpp"
#include "dhdiag/diag/relations.hpp"
#include "dhdiag/diag/timeseries.hpp"
#include "dhdiag/diag/violations.hpp"
#include "dhdiag/stats/distribution.hpp"
#include "dhdiag/store/csv_ingest.hpp"
#include "dhdiag/store/reading_table.hpp"

// Wire format of every diagnostics result. Timestamps are ISO 8601 UTC
// strings, absent values are null and statuses are lowercase color names.
namespace dhdiag::api {

using Json = nlohmann::ordered_json;

Json to_json(diag::QualityStatus s);
Json to_json(const diag::GaugeSpec& g);
Json gauge_zones_json();
Json thresholds_json(double anomaly_threshold);
Json catalog_json();
Json to_json(const diag::ColumnKpi& kpi);
Json to_json(const stats::BoxplotStats& b);
Json to_json(const stats::HistogramStats& h);
Json to_json(const diag::HeatmapMatrix& m);
Json to_json(const diag::MissingTimestamps& m);
Json to_json(const diag::RuleViolationReport& r);
Json to_json(const diag::CorrelationMatrix& m);
Json to_json(const diag::ScatterSample& s);
Json to_json(const diag::TimeSeriesWindow& w);
Json to_json(const diag::MeterStatsRow& row, const std::vector<std::string>& columns);
Json to_json(const diag::MeterStatsPage& page, const std::vector<std::string>& columns);
Json to_json(const store::IngestReport& r);
Json summary_json(const store::ReadingTable& table, const diag::DiagnosticsOptions& options);

}  // namespace dhdiag::api
