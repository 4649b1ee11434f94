#pragma once

#include <chrono>
#include <optional>
#include <string>
#include <string_view>

namespace dhdiag::store {

// Hour-aligned UTC instant; the unit of the reading grid.
using HourStamp = std::chrono::sys_time<std::chrono::hours>;
using Date = std::chrono::sys_days;

// Zone used for timestamps that carry no UTC offset.
//
// Supported names: "UTC", fixed offsets such as "+01:00", and the
// central-European zones ("Europe/Copenhagen", "CET", ...), which follow the
// EU rule: UTC+1, UTC+2 from the last Sunday of March 01:00 UTC to the last
// Sunday of October 01:00 UTC. A repeated autumn hour resolves to its first
// (summer time) occurrence; a skipped spring hour is read as standard time.
class TimeZoneRule {
 public:
  static TimeZoneRule utc();
  // Throws std::invalid_argument for unsupported names.
  static TimeZoneRule parse(std::string_view name);

  std::chrono::sys_seconds to_utc(std::chrono::local_seconds local) const;
  const std::string& name() const noexcept { return name_; }

 private:
  enum class Kind { kFixed, kCentralEuropean };
  TimeZoneRule(Kind kind, std::chrono::seconds offset, std::string name)
      : kind_(kind), offset_(offset), name_(std::move(name)) {}

  Kind kind_;
  std::chrono::seconds offset_;
  std::string name_;
};

bool is_eu_summer_time(std::chrono::sys_seconds utc);

// ISO 8601 date-time: "YYYY-MM-DD[(T| )HH[:MM[:SS[.fff]]]][Z|+HH[:MM]|-HH[:MM]]".
// Converts to UTC and truncates to the hour. Empty on malformed input.
std::optional<HourStamp> parse_timestamp(std::string_view text, const TimeZoneRule& default_zone);

// "2020-01-01T05:00:00Z"
std::string format_timestamp(HourStamp t);
// "2020-01-01"
std::string format_date(Date d);

inline Date date_of(HourStamp t) { return std::chrono::floor<std::chrono::days>(t); }
inline int hour_of_day(HourStamp t) {
  return static_cast<int>((t - std::chrono::floor<std::chrono::days>(t)).count());
}

}  // namespace dhdiag::store
