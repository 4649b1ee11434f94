#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "dhdiag/store/activity_mode.hpp"
#include "dhdiag/store/reading_table.hpp"

namespace dhdiag::store {

struct MeterActivity {
  std::string meter_id;
  HourStamp first_seen;
  HourStamp last_seen;
  HourStamp window_end;  // last_seen or the dataset end, per WindowMode
  std::size_t expected_count = 0;
  std::size_t present_count = 0;
};

// Every hour from the first to the last timestamp, inclusive. Empty for an empty table.
std::vector<HourStamp> expected_grid(const ReadingTable& table);
std::size_t expected_grid_length(const ReadingTable& table);

// One entry per meter, in meter order.
std::vector<MeterActivity> meter_activity(const ReadingTable& table,
                                          WindowMode mode = WindowMode::kFirstToLast);

}  // namespace dhdiag::store
