#include "dhdiag/api/json_io.hpp"

#include "dhdiag/store/time.hpp"

namespace dhdiag::api {

namespace {

template <typename T>
Json opt(const std::optional<T>& v) {
  return v ? Json(*v) : Json(nullptr);
}

Json stamp(store::HourStamp t) { return store::format_timestamp(t); }

Json opt_stamp(const std::optional<store::HourStamp>& t) { return t ? stamp(*t) : Json(nullptr); }

Json rule_json(const store::BoundRule& r) {
  return {{"column", r.column}, {"kind", r.kind == store::BoundKind::kMin ? "min" : "max"}, {"bound", r.bound}};
}

}  // namespace

Json to_json(diag::QualityStatus s) { return std::string(diag::to_string(s)); }

Json gauge_zones_json() {
  Json zones = Json::array();
  for (const auto& z : diag::kGaugeZones)
    zones.push_back({{"lo", z.lo},
                     {"hi", z.hi},
                     {"lo_inclusive", z.lo_inclusive},
                     {"hi_inclusive", z.hi_inclusive},
                     {"status", to_json(z.status)}});
  return zones;
}

Json to_json(const diag::GaugeSpec& g) {
  return {{"value", g.value},
          {"scale_min", g.scale_min},
          {"scale_max", g.scale_max},
          {"position", g.position},
          {"status", to_json(g.status)},
          {"zones", gauge_zones_json()}};
}

Json thresholds_json(double anomaly_threshold) {
  return {{"modified_z", anomaly_threshold},
          {"anomaly_rate", {{"yellow_from", diag::kAnomalyYellowFrom}, {"red_above", diag::kAnomalyRedAbove}}},
          {"null_rate", {{"yellow_from", diag::kNullYellowFrom}, {"red_above", diag::kNullRedAbove}}},
          {"skewness", {{"green_up_to", diag::kSkewGreenUpTo}, {"yellow_up_to", diag::kSkewYellowUpTo}}}};
}

Json catalog_json() {
  Json out = Json::array();
  for (const auto& m : diag::diagnostic_mappings())
    out.push_back({{"visualization", m.visualization}, {"issue", m.issue}, {"metric", m.metric}, {"action", m.action}});
  return out;
}

Json to_json(const diag::ColumnKpi& k) {
  Json j;
  j["column"] = k.column;
  j["unit"] = k.unit;
  j["meter_id"] = opt(k.meter_id);
  if (k.summary)
    j["summary"] = {{"count", k.summary->count},   {"mean", k.summary->mean},
                    {"median", k.summary->median}, {"mad", k.summary->mad},
                    {"mean_abs_dev", k.summary->mean_abs_dev}, {"min", k.summary->min},
                    {"max", k.summary->max}};
  else
    j["summary"] = nullptr;
  j["anomaly"] = {{"count", k.anomaly.count},
                  {"anomaly_count", k.anomaly.anomaly_count},
                  {"anomaly_rate", k.anomaly.anomaly_rate},
                  {"threshold", k.anomaly.threshold},
                  {"degenerate_scale", k.anomaly.degenerate_scale},
                  {"status", to_json(k.anomaly_status)}};
  j["nulls"] = {{"null_count", k.nulls.null_count},
                {"structurally_missing_count", k.nulls.structurally_missing_count},
                {"non_null_count", k.nulls.non_null_count},
                {"expected_count", k.nulls.expected_count},
                {"null_rate", k.nulls.null_rate},
                {"status", to_json(k.null_status)}};
  j["skewness"] = {{"medcouple", k.skewness ? Json(k.skewness->value) : Json(nullptr)},
                   {"degenerate", k.skewness ? k.skewness->degenerate : true},
                   {"status", to_json(k.skewness_status)}};
  j["gauges"] = {{"mean", k.mean_gauge ? to_json(*k.mean_gauge) : Json(nullptr)},
                 {"median", k.median_gauge ? to_json(*k.median_gauge) : Json(nullptr)},
                 {"mad", k.summary ? Json(k.summary->mad) : Json(nullptr)}};
  j["rule_violation_count"] = k.rule_violation_count;
  j["suggested_actions"] = k.suggested_actions;
  j["overall_status"] = to_json(k.overall_status());
  return j;
}

Json to_json(const stats::BoxplotStats& b) {
  return {{"min", b.min},
          {"q1", b.q1},
          {"median", b.median},
          {"q3", b.q3},
          {"max", b.max},
          {"mean", b.mean},
          {"iqr", b.iqr},
          {"lower_whisker", b.lower_whisker},
          {"upper_whisker", b.upper_whisker},
          {"outlier_count", b.outlier_count}};
}

Json to_json(const stats::HistogramStats& h) {
  return {{"bin_edges", h.bin_edges}, {"counts", h.counts}, {"underflow", h.underflow}, {"overflow", h.overflow}};
}

Json to_json(const diag::HeatmapMatrix& m) {
  Json j;
  j["kind"] = std::string(diag::to_string(m.kind));
  j["column"] = opt(m.column);
  j["normalized"] = m.normalized;
  Json dates = Json::array();
  for (const auto d : m.dates) dates.push_back(store::format_date(d));
  j["dates"] = std::move(dates);
  j["hours"] = Json::array();
  for (int h = 0; h < 24; ++h) j["hours"].push_back(h);
  j["cells"] = m.cells;
  j["active_meters"] = m.active_meters;
  j["active_meters_per_date"] = m.active_meters_per_date;
  Json zero = Json::array();
  for (const auto& c : m.zero_active_cells) zero.push_back({{"date", store::format_date(c.date)}, {"hour", c.hour}});
  j["zero_active_cells"] = std::move(zero);
  j["total"] = m.total();
  return j;
}

Json to_json(const diag::MissingTimestamps& m) {
  Json instants = Json::array();
  for (const auto t : m.instants) instants.push_back(stamp(t));
  return {{"count", m.count}, {"grid_length", m.grid_length}, {"instants", std::move(instants)}};
}

Json to_json(const diag::RuleViolationReport& r) {
  Json rules = Json::array();
  for (const auto& rv : r.rules) {
    Json j = rule_json(rv.rule);
    j["total"] = rv.total;
    Json per = Json::array();
    for (const auto& p : rv.per_meter) per.push_back({{"meter_id", p.meter_id}, {"count", p.count}});
    j["per_meter"] = std::move(per);
    Json samples = Json::array();
    for (const auto& s : rv.samples)
      samples.push_back({{"timestamp", stamp(s.timestamp)}, {"meter_id", s.meter_id}, {"value", s.value}});
    j["samples"] = std::move(samples);
    rules.push_back(std::move(j));
  }
  return {{"total", r.total}, {"rules", std::move(rules)}};
}

Json to_json(const diag::CorrelationMatrix& m) {
  Json cells = Json::array();
  for (const auto& row : m.cells) {
    Json r = Json::array();
    for (const auto& c : row) r.push_back(opt(c));
    cells.push_back(std::move(r));
  }
  return {{"method", std::string(diag::to_string(m.method))},
          {"columns", m.columns},
          {"cells", std::move(cells)},
          {"pair_counts", m.pair_counts}};
}

Json to_json(const diag::ScatterSample& s) {
  return {{"x_column", s.x_column}, {"y_column", s.y_column}, {"complete_pairs", s.complete_pairs},
          {"sampled", s.sampled},   {"seed", s.seed},           {"count", s.x.size()},
          {"x", s.x},               {"y", s.y}};
}

Json to_json(const diag::TimeSeriesWindow& w) {
  Json points = Json::array();
  for (const auto& p : w.points) points.push_back({{"timestamp", stamp(p.timestamp)}, {"value", opt(p.value)}});
  Json buckets = Json::array();
  for (const auto& b : w.buckets)
    buckets.push_back({{"start", stamp(b.start)},
                       {"hours", b.hours},
                       {"null_count", b.null_count},
                       {"min", opt(b.min)},
                       {"max", opt(b.max)},
                       {"mean", opt(b.mean)}});
  return {{"meter_id", w.meter_id},       {"column", w.column},
          {"from", opt_stamp(w.from)},    {"to", opt_stamp(w.to)},
          {"bucketed", w.bucketed},       {"bucket_hours", w.bucket_hours},
          {"points", std::move(points)}, {"buckets", std::move(buckets)}};
}

Json to_json(const diag::MeterStatsRow& row, const std::vector<std::string>& columns) {
  Json cols = Json::object();
  for (std::size_t c = 0; c < columns.size(); ++c) {
    const auto& s = row.columns[c];
    cols[columns[c]] = {{"non_null_count", s.non_null_count},
                        {"missing_count", s.missing_count},
                        {"null_rate", s.null_rate},
                        {"anomaly_rate", opt(s.anomaly_rate)},
                        {"mean", opt(s.mean)},
                        {"median", opt(s.median)},
                        {"mad", opt(s.mad)},
                        {"medcouple", opt(s.medcouple)},
                        {"min", opt(s.min)},
                        {"max", opt(s.max)},
                        {"negative_count", s.negative_count},
                        {"violation_count", s.violation_count}};
  }
  return {{"meter_id", row.meter_id},
          {"first_seen", stamp(row.first_seen)},
          {"last_seen", stamp(row.last_seen)},
          {"expected_count", row.expected_count},
          {"present_count", row.present_count},
          {"null_rate", row.null_rate},
          {"anomaly_rate", opt(row.anomaly_rate)},
          {"columns", std::move(cols)}};
}

Json to_json(const diag::MeterStatsPage& page, const std::vector<std::string>& columns) {
  Json rows = Json::array();
  for (const auto& r : page.rows) rows.push_back(to_json(r, columns));
  return {{"total_matching", page.total_matching},
          {"page", page.page},
          {"page_size", page.page_size},
          {"columns", columns},
          {"rows", std::move(rows)}};
}

Json to_json(const store::IngestReport& r) {
  Json errors = Json::array();
  for (const auto& e : r.errors) errors.push_back({{"file", e.file}, {"line", e.line}, {"message", e.message}});
  return {{"rows_read", r.rows_read},
          {"rows_accepted", r.rows_accepted},
          {"rows_rejected", r.rows_rejected},
          {"duplicate_rows", r.duplicate_rows},
          {"nonfinite_cells", r.nonfinite_cells},
          {"errors", std::move(errors)}};
}

Json summary_json(const store::ReadingTable& table, const diag::DiagnosticsOptions& options) {
  Json columns = Json::array();
  for (const auto& c : table.columns()) columns.push_back({{"name", c.name}, {"unit", c.unit}});
  Json rules = Json::array();
  for (const auto& r : options.rules) rules.push_back(rule_json(r));
  return {{"row_count", table.row_count()},
          {"meter_count", table.meter_count()},
          {"timestamp_count", table.timestamps().size()},
          {"first_timestamp", opt_stamp(table.first_time())},
          {"last_timestamp", opt_stamp(table.last_time())},
          {"columns", std::move(columns)},
          {"window_mode", std::string(store::to_string(options.window_mode))},
          {"rules", std::move(rules)},
          {"thresholds", thresholds_json(options.anomaly_threshold)},
          {"gauge_zones", gauge_zones_json()},
          {"diagnostics_catalog", catalog_json()}};
}

}  // namespace dhdiag::api
