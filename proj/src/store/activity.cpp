#include "dhdiag/store/activity.hpp"

namespace dhdiag::store {

std::size_t expected_grid_length(const ReadingTable& table) {
  if (table.empty()) return 0;
  return static_cast<std::size_t>((*table.last_time() - *table.first_time()).count()) + 1;
}

std::vector<HourStamp> expected_grid(const ReadingTable& table) {
  std::vector<HourStamp> grid;
  if (table.empty()) return grid;
  grid.reserve(expected_grid_length(table));
  for (auto t = *table.first_time(); t <= *table.last_time(); t += std::chrono::hours{1}) grid.push_back(t);
  return grid;
}

std::vector<MeterActivity> meter_activity(const ReadingTable& table, WindowMode mode) {
  std::vector<MeterActivity> out;
  out.reserve(table.meter_count());
  const auto times = table.row_times();
  for (std::uint32_t m = 0; m < table.meter_count(); ++m) {
    const auto rows = table.meter_rows(m);
    MeterActivity a;
    a.meter_id = table.meter_ids()[m];
    a.first_seen = times[rows.front()];
    a.last_seen = times[rows.back()];
    a.window_end = mode == WindowMode::kFirstToDatasetEnd ? *table.last_time() : a.last_seen;
    a.expected_count = static_cast<std::size_t>((a.window_end - a.first_seen).count()) + 1;
    a.present_count = rows.size();
    out.push_back(std::move(a));
  }
  return out;
}

}  // namespace dhdiag::store
