#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "dhdiag/store/time.hpp"

namespace dhdiag::store {

struct ColumnSpec {
  std::string name;
  std::string unit;
};

// One measurement vector. Null cells hold 0.0 in `values` and 0 in `valid`.
struct MeasurementColumn {
  std::string name;
  std::string unit;
  std::vector<double> values;
  std::vector<std::uint8_t> valid;

  bool is_null(std::size_t row) const { return valid[row] == 0; }
  std::optional<double> at(std::size_t row) const {
    if (valid[row] == 0) return std::nullopt;
    return values[row];
  }
  std::size_t null_count() const;

  bool operator==(const MeasurementColumn&) const = default;
};

// Immutable columnar store of hourly readings, one row per (timestamp, meter),
// rows ordered by timestamp then meter id.
class ReadingTable {
 public:
  ReadingTable() = default;

  // Validates ordering, uniqueness and column lengths; throws std::invalid_argument.
  // `meter_ids` must be sorted and each must own at least one row.
  ReadingTable(std::vector<std::string> meter_ids, std::vector<HourStamp> row_times,
               std::vector<std::uint32_t> row_meters, std::vector<MeasurementColumn> columns);

  std::size_t row_count() const noexcept { return row_times_.size(); }
  std::size_t meter_count() const noexcept { return meter_ids_.size(); }
  bool empty() const noexcept { return row_times_.empty(); }

  std::span<const HourStamp> row_times() const noexcept { return row_times_; }
  std::span<const std::uint32_t> row_meters() const noexcept { return row_meters_; }
  const std::vector<std::string>& meter_ids() const noexcept { return meter_ids_; }

  // Distinct timestamps, ascending.
  std::span<const HourStamp> timestamps() const noexcept { return timestamps_; }
  // Rows [offsets[k], offsets[k+1]) share timestamps()[k].
  std::span<const std::size_t> timestamp_offsets() const noexcept { return time_offsets_; }

  // Row indices of one meter, in time order.
  std::span<const std::uint32_t> meter_rows(std::uint32_t meter) const;

  const std::vector<MeasurementColumn>& columns() const noexcept { return columns_; }
  std::vector<std::string> column_names() const;
  const MeasurementColumn* find_column(std::string_view name) const noexcept;
  // Throws UnknownColumnError.
  const MeasurementColumn& column(std::string_view name) const;

  std::optional<std::uint32_t> find_meter(std::string_view id) const noexcept;
  // Throws UnknownMeterError.
  std::uint32_t meter(std::string_view id) const;

  std::optional<HourStamp> first_time() const noexcept;
  std::optional<HourStamp> last_time() const noexcept;

  bool operator==(const ReadingTable& other) const;

 private:
  std::vector<std::string> meter_ids_;
  std::vector<HourStamp> row_times_;
  std::vector<std::uint32_t> row_meters_;
  std::vector<MeasurementColumn> columns_;

  std::vector<HourStamp> timestamps_;
  std::vector<std::size_t> time_offsets_;
  std::vector<std::size_t> meter_offsets_;
  std::vector<std::uint32_t> meter_row_index_;
};

// Accumulates rows in arbitrary order and produces a ReadingTable.
// Later rows replace earlier rows with the same (timestamp, meter).
class TableBuilder {
 public:
  explicit TableBuilder(std::vector<ColumnSpec> columns);

  // `values` follows the column order; NaN or infinity marks a null cell.
  void add_row(HourStamp time, std::string_view meter_id, std::span<const double> values);

  std::size_t rows_added() const noexcept { return times_.size(); }

  struct Result {
    ReadingTable table;
    std::size_t duplicate_rows = 0;
  };
  // Leaves the builder empty.
  Result build();

 private:
  std::vector<ColumnSpec> specs_;
  std::vector<std::int64_t> times_;
  std::vector<std::uint32_t> meters_;
  std::vector<std::vector<double>> values_;
  std::vector<std::string> meter_names_;
  std::unordered_map<std::string, std::uint32_t> meter_lookup_;
  std::string last_meter_;
  std::uint32_t last_meter_id_ = 0;
};

}  // namespace dhdiag::store
