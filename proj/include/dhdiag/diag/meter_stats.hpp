#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "dhdiag/diag/options.hpp"
#include "dhdiag/store/reading_table.hpp"

namespace dhdiag::diag {

// Statistics of one column for one meter. Value statistics are empty when the
// meter has no non-null cell in the column.
struct ColumnMeterStats {
  std::size_t non_null_count = 0;
  std::size_t missing_count = 0;  // null cells plus absent rows in the window
  double null_rate = 0.0;
  std::optional<double> anomaly_rate;
  std::optional<double> mean;
  std::optional<double> median;
  std::optional<double> mad;
  std::optional<double> medcouple;
  std::optional<double> min;
  std::optional<double> max;
  std::size_t negative_count = 0;
  std::size_t violation_count = 0;
};

struct MeterStatsRow {
  std::string meter_id;
  store::HourStamp first_seen;
  store::HourStamp last_seen;
  std::size_t expected_count = 0;
  std::size_t present_count = 0;
  double null_rate = 0.0;  // missing cells over expected cells, all columns
  std::optional<double> anomaly_rate;  // anomalies over non-null cells, all columns
  std::vector<ColumnMeterStats> columns;  // aligned with MeterStatsTable::columns
};

struct MeterStatsTable {
  std::vector<std::string> columns;
  std::vector<MeterStatsRow> rows;  // meter id order
};

MeterStatsTable compute_meter_stats(const store::ReadingTable& table, const DiagnosticsOptions& options = {});

// Filter and sort errors name the offending term.
class FilterError : public std::invalid_argument {
 public:
  FilterError(std::string term, const std::string& reason)
      : std::invalid_argument("bad filter term '" + term + "': " + reason), term_(std::move(term)), reason_(reason) {}
  const std::string& term() const noexcept { return term_; }
  const std::string& reason() const noexcept { return reason_; }

 private:
  std::string term_;
  std::string reason_;
};

// A field of MeterStatsRow: meter-level ("null_rate", "anomaly_rate",
// "present_count", "expected_count", "meter_id", "first_seen", "last_seen") or
// "<column>.<stat>" with stat one of null_rate, anomaly_rate, mean, median,
// mad, medcouple, min, max, negative_count, violation_count, non_null_count,
// missing_count.
class FieldRef {
 public:
  // Throws FilterError naming `text` for unknown fields.
  static FieldRef parse(std::string_view text, const std::vector<std::string>& columns);

  using Value = std::variant<double, std::string>;
  std::optional<Value> get(const MeterStatsRow& row) const;
  bool is_text() const noexcept;
  bool is_time() const noexcept;
  const std::string& name() const noexcept { return name_; }

 private:
  std::string name_;
  int kind_ = 0;
  std::size_t column_ = 0;
};

enum class CompareOp { kLess, kLessEqual, kGreater, kGreaterEqual, kEqual, kNotEqual };

struct FilterTerm {
  std::string text;
  FieldRef field;
  CompareOp op = CompareOp::kEqual;
  FieldRef::Value literal;
};

// Conjunction of `field op literal` terms joined by "and" or "&&". Operators:
// < <= > >= = == != and the forms ≤ ≥ ≠. Rows lacking a value never match.
// An empty or blank filter matches everything.
class MeterFilter {
 public:
  static MeterFilter parse(std::string_view text, const std::vector<std::string>& columns);
  bool matches(const MeterStatsRow& row) const;
  const std::vector<FilterTerm>& terms() const noexcept { return terms_; }

 private:
  std::vector<FilterTerm> terms_;
};

// "field", "-field", "+field", "field asc", "field desc". Empty rows sort last
// in both directions; ties break on meter_id.
struct MeterSort {
  FieldRef field;
  bool descending = false;
  static MeterSort parse(std::string_view text, const std::vector<std::string>& columns);
};

struct MeterQuery {
  std::string filter;
  std::string sort = "meter_id";
  std::size_t page = 0;  // 0-based
  std::size_t page_size = 50;
};

struct MeterStatsPage {
  std::vector<MeterStatsRow> rows;
  std::size_t total_matching = 0;
  std::size_t page = 0;
  std::size_t page_size = 0;
};

// Throws FilterError, and std::invalid_argument for page_size == 0.
MeterStatsPage query_meter_stats(const MeterStatsTable& stats, const MeterQuery& query);

// Ids of all matching meters, sorted.
std::vector<std::string> select_meters(const MeterStatsTable& stats, std::string_view filter);

// "meter_id" header and one id per line, sorted, LF endings. Ids holding a
// comma, quote or line break are quoted.
std::string export_meter_list(std::vector<std::string> meter_ids);

// Inverse of export_meter_list.
std::vector<std::string> parse_meter_list(std::string_view csv);

}  // namespace dhdiag::diag
