#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "dhdiag/store/activity_mode.hpp"
#include "dhdiag/store/reading_table.hpp"

namespace dhdiag::diag {

enum class HeatmapKind { kMissingValues, kMissingMeters };
std::string_view to_string(HeatmapKind k) noexcept;

struct HeatmapCell {
  store::Date date;
  int hour = 0;
};

// Hour-of-day by date. Cells are indexed [hour][date index].
struct HeatmapMatrix {
  HeatmapKind kind = HeatmapKind::kMissingMeters;
  std::optional<std::string> column;  // missing-values maps only
  bool normalized = false;
  std::vector<store::Date> dates;     // ascending, every day of the table's span
  std::vector<std::vector<double>> cells;          // 24 rows
  std::vector<std::vector<std::size_t>> active_meters;  // 24 rows, meters inside their window
  std::vector<std::size_t> active_meters_per_date;  // meters whose window touches the date
  std::vector<HeatmapCell> zero_active_cells;       // normalized maps: cells forced to 0

  double total() const;
};

// Per active (meter, hour): value null or row absent. Timestamps are UTC.
// Throws UnknownColumnError.
HeatmapMatrix missing_value_heatmap(const store::ReadingTable& table, std::string_view column, bool normalize,
                                    store::WindowMode mode = store::WindowMode::kFirstToLast);

// Per active (meter, hour): row absent.
HeatmapMatrix missing_meter_heatmap(const store::ReadingTable& table, bool normalize = false,
                                    store::WindowMode mode = store::WindowMode::kFirstToLast);

struct MissingTimestamps {
  std::size_t count = 0;
  std::size_t grid_length = 0;
  std::vector<store::HourStamp> instants;
};

// Grid hours at which no meter has a row.
MissingTimestamps missing_timestamps(const store::ReadingTable& table);

}  // namespace dhdiag::diag
