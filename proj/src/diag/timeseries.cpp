#include "dhdiag/diag/timeseries.hpp"

#include <algorithm>
#include <limits>
#include <stdexcept>

namespace dhdiag::diag {

using std::chrono::hours;

TimeSeriesWindow timeseries_window(const store::ReadingTable& table, std::string_view meter_id,
                                   std::string_view column, std::optional<store::HourStamp> from,
                                   std::optional<store::HourStamp> to, std::size_t max_points,
                                   store::WindowMode mode) {
  const auto meter = table.meter(meter_id);
  const auto& col = table.column(column);
  if (max_points == 0) throw std::invalid_argument("max_points must be positive");
  if (from && to && *from > *to) throw std::invalid_argument("from is after to");

  TimeSeriesWindow w;
  w.meter_id = table.meter_ids()[meter];
  w.column = col.name;

  const auto rows = table.meter_rows(meter);
  const auto times = table.row_times();
  const store::HourStamp first = times[rows.front()];
  const store::HourStamp end = mode == store::WindowMode::kFirstToDatasetEnd ? *table.last_time()
                                                                             : times[rows.back()];
  const store::HourStamp lo = from ? std::max(*from, first) : first;
  const store::HourStamp hi = to ? std::min(*to, end) : end;
  if (lo > hi) return w;
  w.from = lo;
  w.to = hi;

  const auto span = static_cast<std::size_t>((hi - lo).count()) + 1;
  auto it = std::lower_bound(rows.begin(), rows.end(), lo,
                             [&](std::uint32_t r, store::HourStamp t) { return times[r] < t; });

  if (span <= max_points) {
    w.points.reserve(span);
    for (auto t = lo; t <= hi; t += hours{1}) {
      SeriesPoint p{t, std::nullopt};
      if (it != rows.end() && times[*it] == t) {
        p.value = col.at(*it);
        ++it;
      }
      w.points.push_back(p);
    }
    return w;
  }

  w.bucketed = true;
  w.bucket_hours = (span + max_points - 1) / max_points;
  for (std::size_t start = 0; start < span; start += w.bucket_hours) {
    SeriesBucket b;
    b.start = lo + hours{start};
    b.hours = std::min(w.bucket_hours, span - start);
    const store::HourStamp stop = b.start + hours{b.hours};
    std::size_t values = 0;
    double sum = 0.0;
    double mn = std::numeric_limits<double>::infinity();
    double mx = -mn;
    for (; it != rows.end() && times[*it] < stop; ++it) {
      if (!col.valid[*it]) continue;
      const double v = col.values[*it];
      ++values;
      sum += v;
      mn = std::min(mn, v);
      mx = std::max(mx, v);
    }
    b.null_count = b.hours - values;
    if (values > 0) {
      b.min = mn;
      b.max = mx;
      b.mean = sum / static_cast<double>(values);
    }
    w.buckets.push_back(b);
  }
  return w;
}

}  // namespace dhdiag::diag
