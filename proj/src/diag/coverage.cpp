#include "dhdiag/diag/coverage.hpp"

#include "dhdiag/store/activity.hpp"

namespace dhdiag::diag {

using store::HourStamp;
using std::chrono::hours;

std::string_view to_string(HeatmapKind k) noexcept {
  return k == HeatmapKind::kMissingValues ? "missing_values" : "missing_meters";
}

double HeatmapMatrix::total() const {
  double t = 0.0;
  for (const auto& row : cells)
    for (const double c : row) t += c;
  return t;
}

namespace {

HeatmapMatrix build_heatmap(const store::ReadingTable& table, const store::MeasurementColumn* column,
                            bool normalize, store::WindowMode mode) {
  HeatmapMatrix h;
  h.kind = column ? HeatmapKind::kMissingValues : HeatmapKind::kMissingMeters;
  if (column) h.column = column->name;
  h.normalized = normalize;
  h.cells.assign(24, {});
  h.active_meters.assign(24, {});
  if (table.empty()) return h;

  const HourStamp t0 = *table.first_time();
  const std::size_t grid = static_cast<std::size_t>((*table.last_time() - t0).count()) + 1;
  const store::Date d0 = store::date_of(t0);
  const store::Date d1 = store::date_of(*table.last_time());
  const std::size_t ndates = static_cast<std::size_t>((d1 - d0).count()) + 1;
  for (std::size_t d = 0; d < ndates; ++d) h.dates.push_back(d0 + std::chrono::days{d});
  for (int hr = 0; hr < 24; ++hr) {
    h.cells[hr].assign(ndates, 0.0);
    h.active_meters[hr].assign(ndates, 0);
  }
  h.active_meters_per_date.assign(ndates, 0);

  // Active meters per grid hour via a difference array over windows.
  std::vector<std::int64_t> delta(grid + 1, 0);
  std::vector<std::int64_t> date_delta(ndates + 1, 0);
  for (const auto& a : store::meter_activity(table, mode)) {
    const auto lo = static_cast<std::size_t>((a.first_seen - t0).count());
    const auto hi = static_cast<std::size_t>((a.window_end - t0).count());
    ++delta[lo];
    --delta[hi + 1];
    ++date_delta[static_cast<std::size_t>((store::date_of(a.first_seen) - d0).count())];
    --date_delta[static_cast<std::size_t>((store::date_of(a.window_end) - d0).count()) + 1];
  }
  std::int64_t running = 0;
  for (std::size_t d = 0; d < ndates; ++d) {
    running += date_delta[d];
    h.active_meters_per_date[d] = static_cast<std::size_t>(running);
  }

  const auto times = table.timestamps();
  const auto offsets = table.timestamp_offsets();
  std::size_t k = 0;  // index into distinct timestamps
  running = 0;
  for (std::size_t g = 0; g < grid; ++g) {
    running += delta[g];
    const HourStamp t = t0 + hours{g};
    std::size_t rows = 0;
    std::size_t nulls = 0;
    if (k < times.size() && times[k] == t) {
      rows = offsets[k + 1] - offsets[k];
      if (column)
        for (std::size_t r = offsets[k]; r < offsets[k + 1]; ++r) nulls += column->valid[r] ? 0 : 1;
      ++k;
    }
    const auto active = static_cast<std::size_t>(running);
    const auto hr = static_cast<std::size_t>(store::hour_of_day(t));
    const std::size_t d = static_cast<std::size_t>((store::date_of(t) - d0).count());
    h.active_meters[hr][d] = active;
    h.cells[hr][d] = static_cast<double>(active - rows + nulls);
  }

  if (normalize) {
    for (std::size_t d = 0; d < ndates; ++d)
      for (int hr = 0; hr < 24; ++hr) {
        if (h.active_meters[hr][d] == 0) {
          h.cells[hr][d] = 0.0;
          h.zero_active_cells.push_back({h.dates[d], hr});
        } else {
          h.cells[hr][d] /= static_cast<double>(h.active_meters[hr][d]);
        }
      }
  }
  return h;
}

}  // namespace

HeatmapMatrix missing_value_heatmap(const store::ReadingTable& table, std::string_view column, bool normalize,
                                    store::WindowMode mode) {
  return build_heatmap(table, &table.column(column), normalize, mode);
}

HeatmapMatrix missing_meter_heatmap(const store::ReadingTable& table, bool normalize, store::WindowMode mode) {
  return build_heatmap(table, nullptr, normalize, mode);
}

MissingTimestamps missing_timestamps(const store::ReadingTable& table) {
  MissingTimestamps m;
  if (table.empty()) return m;
  const HourStamp t0 = *table.first_time();
  m.grid_length = static_cast<std::size_t>((*table.last_time() - t0).count()) + 1;
  const auto times = table.timestamps();
  std::size_t k = 0;
  for (HourStamp t = t0; t <= *table.last_time(); t += hours{1}) {
    if (k < times.size() && times[k] == t) {
      ++k;
    } else {
      m.instants.push_back(t);
    }
  }
  m.count = m.instants.size();
  return m;
}

}  // namespace dhdiag::diag
