#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <random>
#include <set>

#include "dhdiag/store/activity.hpp"
#include "dhdiag/store/errors.hpp"
#include "dhdiag/store/reading_table.hpp"

using namespace dhdiag::store;
using std::chrono::hours;

namespace {

const double kNan = std::numeric_limits<double>::quiet_NaN();

HourStamp at(int h) { return HourStamp{hours{438288 + h}}; }  // 2020-01-01T00Z

HourStamp parse_utc(std::string_view s) { return *parse_timestamp(s, TimeZoneRule::utc()); }

ReadingTable one_column(const std::vector<std::pair<int, std::string>>& rows) {
  TableBuilder b(std::vector<ColumnSpec>{{"energy", "MWh"}});
  for (const auto& [h, m] : rows) {
    const double v = h;
    b.add_row(at(h), m, std::span<const double>(&v, 1));
  }
  return b.build().table;
}

}  // namespace

TEST_CASE("builder orders rows by time then meter id", "[table]") {
  TableBuilder b(std::vector<ColumnSpec>{{"energy", "MWh"}, {"flow", "L/h"}});
  b.add_row(at(2), "b", std::vector<double>{1, 2});
  b.add_row(at(1), "c", std::vector<double>{3, kNan});
  b.add_row(at(1), "a", std::vector<double>{5, 6});
  auto r = b.build();
  const auto& t = r.table;
  CHECK(r.duplicate_rows == 0);
  REQUIRE(t.row_count() == 3);
  CHECK(t.meter_ids() == std::vector<std::string>{"a", "b", "c"});
  CHECK(t.row_times()[0] == at(1));
  CHECK(t.meter_ids()[t.row_meters()[0]] == "a");
  CHECK(t.meter_ids()[t.row_meters()[1]] == "c");
  CHECK(t.meter_ids()[t.row_meters()[2]] == "b");
  CHECK(t.column("flow").is_null(1));
  CHECK(t.column("flow").values[1] == 0.0);
  CHECK(t.column("flow").null_count() == 1);
  CHECK(t.column("energy").at(2) == 1.0);
  CHECK(t.timestamps().size() == 2);
  CHECK(std::vector<std::size_t>(t.timestamp_offsets().begin(), t.timestamp_offsets().end()) ==
        std::vector<std::size_t>{0, 2, 3});
}

TEST_CASE("duplicate rows: the last occurrence wins", "[table]") {
  TableBuilder b(std::vector<ColumnSpec>{{"energy", "MWh"}});
  b.add_row(at(0), "m1", std::vector<double>{1.0});
  b.add_row(at(1), "m1", std::vector<double>{2.0});
  b.add_row(at(0), "m1", std::vector<double>{9.0});
  const auto r = b.build();
  CHECK(r.duplicate_rows == 1);
  REQUIRE(r.table.row_count() == 2);
  CHECK(r.table.column("energy").values[0] == 9.0);
  CHECK(r.table.column("energy").values[1] == 2.0);
}

TEST_CASE("infinite inputs become null", "[table]") {
  TableBuilder b(std::vector<ColumnSpec>{{"x", ""}});
  b.add_row(at(0), "m", std::vector<double>{std::numeric_limits<double>::infinity()});
  b.add_row(at(1), "m", std::vector<double>{-std::numeric_limits<double>::infinity()});
  const auto t = b.build().table;
  CHECK(t.column("x").null_count() == 2);
}

TEST_CASE("lookups throw typed errors", "[table]") {
  const auto t = one_column({{0, "m1"}});
  CHECK_THROWS_AS(t.column("nope"), UnknownColumnError);
  CHECK_THROWS_AS(t.meter("nope"), UnknownMeterError);
  CHECK(t.meter("m1") == 0);
  CHECK_FALSE(t.find_meter("zzz"));
  CHECK(t.find_column("nope") == nullptr);
}

TEST_CASE("table constructor rejects inconsistent input", "[table]") {
  MeasurementColumn c{"x", "", {1.0, 2.0}, {1, 1}};
  CHECK_THROWS_AS(ReadingTable({"a"}, {at(1), at(0)}, {0, 0}, {c}), std::invalid_argument);
  CHECK_THROWS_AS(ReadingTable({"a"}, {at(0), at(0)}, {0, 0}, {c}), std::invalid_argument);
  CHECK_THROWS_AS(ReadingTable({"b", "a"}, {at(0), at(0)}, {0, 1}, {c}), std::invalid_argument);
  CHECK_THROWS_AS(ReadingTable({"a", "b"}, {at(0), at(1)}, {0, 0}, {c}), std::invalid_argument);
  CHECK_NOTHROW(ReadingTable({"a", "b"}, {at(0), at(0)}, {0, 1}, {c}));
}

TEST_CASE("expected grid examples", "[grid]") {
  SECTION("two days") {
    TableBuilder b(std::vector<ColumnSpec>{{"x", ""}});
    b.add_row(parse_utc("2020-01-01T00:00:00Z"), "m", std::vector<double>{1});
    b.add_row(parse_utc("2020-01-02T23:00:00Z"), "m", std::vector<double>{1});
    const auto t = b.build().table;
    CHECK(expected_grid(t).size() == 48);
    CHECK(expected_grid_length(t) == 48);
  }
  SECTION("single timestamp") {
    const auto t = one_column({{5, "a"}, {5, "b"}});
    CHECK(expected_grid(t) == std::vector<HourStamp>{at(5)});
  }
  SECTION("empty table") {
    const ReadingTable t;
    CHECK(expected_grid(t).empty());
    CHECK(expected_grid_length(t) == 0);
  }
}

TEST_CASE("expected grid matches brute-force enumeration", "[grid][property]") {
  std::mt19937_64 rng(42);
  for (int trial = 0; trial < 500; ++trial) {
    std::uniform_int_distribution<int> hour(0, 500);
    std::uniform_int_distribution<int> meter(0, 5);
    std::vector<std::pair<int, std::string>> rows;
    const int n = 1 + static_cast<int>(rng() % 40);
    for (int i = 0; i < n; ++i) rows.emplace_back(hour(rng), "m" + std::to_string(meter(rng)));
    const auto t = one_column(rows);

    // oracle: walk from the earliest raw stamp one hour at a time
    std::set<int> hs;
    for (const auto& r : rows) hs.insert(r.first);
    std::vector<HourStamp> want;
    for (int h = *hs.begin(); h <= *hs.rbegin(); ++h) want.push_back(at(h));

    const auto grid = expected_grid(t);
    REQUIRE(grid == want);
    REQUIRE(std::adjacent_find(grid.begin(), grid.end(), [](auto a, auto b) { return b - a != hours{1}; }) ==
            grid.end());
  }
}

TEST_CASE("meter activity examples", "[activity]") {
  SECTION("contiguous") {
    const auto a = meter_activity(one_column({{0, "m"}, {1, "m"}, {2, "m"}}));
    REQUIRE(a.size() == 1);
    CHECK(a[0].expected_count == 3);
    CHECK(a[0].present_count == 3);
  }
  SECTION("gap") {
    const auto a = meter_activity(one_column({{0, "m"}, {5, "m"}}));
    CHECK(a[0].expected_count == 6);
    CHECK(a[0].present_count == 2);
    CHECK(a[0].first_seen == at(0));
    CHECK(a[0].last_seen == at(5));
  }
  SECTION("window to dataset end") {
    const auto t = one_column({{0, "a"}, {1, "a"}, {3, "b"}, {9, "b"}});
    const auto first_last = meter_activity(t, WindowMode::kFirstToLast);
    const auto to_end = meter_activity(t, WindowMode::kFirstToDatasetEnd);
    CHECK(first_last[0].expected_count == 2);
    CHECK(to_end[0].expected_count == 10);
    CHECK(to_end[0].window_end == at(9));
    CHECK(to_end[0].last_seen == at(1));
    CHECK(first_last[1].expected_count == 7);
    CHECK(to_end[1].expected_count == 7);
  }
}

TEST_CASE("meter activity invariants on random tables", "[activity][property]") {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 500; ++trial) {
    std::vector<std::pair<int, std::string>> rows;
    const int n = 1 + static_cast<int>(rng() % 60);
    for (int i = 0; i < n; ++i)
      rows.emplace_back(static_cast<int>(rng() % 200), "m" + std::to_string(rng() % 4));
    const auto t = one_column(rows);
    for (const auto mode : {WindowMode::kFirstToLast, WindowMode::kFirstToDatasetEnd}) {
      const auto acts = meter_activity(t, mode);
      REQUIRE(acts.size() == t.meter_count());
      for (const auto& a : acts) {
        std::set<int> hs;
        for (const auto& r : rows)
          if (r.second == a.meter_id) hs.insert(r.first);
        REQUIRE(a.first_seen <= a.last_seen);
        REQUIRE(a.present_count <= a.expected_count);
        REQUIRE(a.present_count == hs.size());
        REQUIRE(a.first_seen == at(*hs.begin()));
        REQUIRE(a.last_seen == at(*hs.rbegin()));
      }
    }
  }
}
