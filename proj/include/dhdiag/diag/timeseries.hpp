#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "dhdiag/store/activity_mode.hpp"
#include "dhdiag/store/reading_table.hpp"

namespace dhdiag::diag {

inline constexpr std::size_t kDefaultTimeseriesPoints = 10000;

struct SeriesPoint {
  store::HourStamp timestamp;
  std::optional<double> value;  // empty for a null cell or an absent row
};

// Fixed-width span [start, start + hours). Statistics cover the non-null values.
struct SeriesBucket {
  store::HourStamp start;
  std::size_t hours = 0;
  std::size_t null_count = 0;  // null cells plus absent rows
  std::optional<double> min;
  std::optional<double> max;
  std::optional<double> mean;
};

struct TimeSeriesWindow {
  std::string meter_id;
  std::string column;
  std::optional<store::HourStamp> from;  // effective bounds, empty when the window is empty
  std::optional<store::HourStamp> to;
  bool bucketed = false;
  std::size_t bucket_hours = 1;
  std::vector<SeriesPoint> points;    // raw mode
  std::vector<SeriesBucket> buckets;  // bucketed mode
};

// Hourly series of one meter inside [from, to] clipped to its activity window.
// Raw points when the clipped window has at most max_points hours, otherwise at
// most max_points buckets. Throws UnknownMeterError, UnknownColumnError, and
// std::invalid_argument when from > to or max_points == 0.
TimeSeriesWindow timeseries_window(const store::ReadingTable& table, std::string_view meter_id,
                                   std::string_view column, std::optional<store::HourStamp> from = std::nullopt,
                                   std::optional<store::HourStamp> to = std::nullopt,
                                   std::size_t max_points = kDefaultTimeseriesPoints,
                                   store::WindowMode mode = store::WindowMode::kFirstToLast);

}  // namespace dhdiag::diag
