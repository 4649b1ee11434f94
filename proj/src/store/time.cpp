#include "dhdiag/store/time.hpp"

#include <cstdio>
#include <stdexcept>

namespace dhdiag::store {

using namespace std::chrono;

namespace {

bool read_digits(std::string_view s, std::size_t pos, std::size_t count, int& out) {
  if (pos + count > s.size()) return false;
  int v = 0;
  for (std::size_t i = pos; i < pos + count; ++i) {
    const char c = s[i];
    if (c < '0' || c > '9') return false;
    v = v * 10 + (c - '0');
  }
  out = v;
  return true;
}

// "+HH", "+HH:MM", "+HHMM"; returns false on malformed input.
bool parse_offset(std::string_view s, seconds& out) {
  if (s.empty() || (s[0] != '+' && s[0] != '-')) return false;
  const int sign = s[0] == '-' ? -1 : 1;
  int hh = 0;
  int mm = 0;
  if (!read_digits(s, 1, 2, hh)) return false;
  if (s.size() == 3) {
  } else if (s.size() == 6 && s[3] == ':') {
    if (!read_digits(s, 4, 2, mm)) return false;
  } else if (s.size() == 5) {
    if (!read_digits(s, 3, 2, mm)) return false;
  } else {
    return false;
  }
  if (hh > 23 || mm > 59) return false;
  out = seconds{sign * (hh * 3600 + mm * 60)};
  return true;
}

std::string lowercase(std::string_view s) {
  std::string out(s);
  for (auto& c : out) c = static_cast<char>(c >= 'A' && c <= 'Z' ? c - 'A' + 'a' : c);
  return out;
}

}  // namespace

bool is_eu_summer_time(sys_seconds utc) {
  const auto y = year_month_day{floor<days>(utc)}.year();
  const sys_seconds start = sys_days{y / March / Sunday[last]} + hours{1};
  const sys_seconds end = sys_days{y / October / Sunday[last]} + hours{1};
  return utc >= start && utc < end;
}

TimeZoneRule TimeZoneRule::utc() { return {Kind::kFixed, seconds{0}, "UTC"}; }

TimeZoneRule TimeZoneRule::parse(std::string_view name) {
  const std::string lower = lowercase(name);
  if (lower == "utc" || lower == "z" || lower == "etc/utc" || lower == "gmt") return utc();
  seconds offset{};
  if (parse_offset(name, offset)) return {Kind::kFixed, offset, std::string(name)};
  if (lower == "cet" || lower == "europe/copenhagen" || lower == "europe/berlin" ||
      lower == "europe/stockholm" || lower == "europe/oslo" || lower == "europe/amsterdam" ||
      lower == "europe/paris")
    return {Kind::kCentralEuropean, hours{1}, std::string(name)};
  throw std::invalid_argument("unsupported time zone: " + std::string(name));
}

sys_seconds TimeZoneRule::to_utc(local_seconds local) const {
  const sys_seconds as_utc{local.time_since_epoch()};
  if (kind_ == Kind::kFixed) return as_utc - offset_;

  const sys_seconds standard = as_utc - hours{1};
  const sys_seconds summer = as_utc - hours{2};
  if (is_eu_summer_time(summer)) return summer;  // also the first of a repeated hour
  return standard;
}

std::optional<HourStamp> parse_timestamp(std::string_view s, const TimeZoneRule& default_zone) {
  int y = 0;
  int mo = 0;
  int d = 0;
  if (s.size() < 10 || !read_digits(s, 0, 4, y) || s[4] != '-' || !read_digits(s, 5, 2, mo) ||
      s[7] != '-' || !read_digits(s, 8, 2, d))
    return std::nullopt;
  const year_month_day ymd{year{y}, month{static_cast<unsigned>(mo)}, day{static_cast<unsigned>(d)}};
  if (!ymd.ok()) return std::nullopt;

  int hh = 0;
  int mi = 0;
  int ss = 0;
  std::size_t pos = 10;
  if (pos < s.size() && (s[pos] == 'T' || s[pos] == ' ')) {
    if (!read_digits(s, pos + 1, 2, hh)) return std::nullopt;
    pos += 3;
    if (pos < s.size() && s[pos] == ':') {
      if (!read_digits(s, pos + 1, 2, mi)) return std::nullopt;
      pos += 3;
      if (pos < s.size() && s[pos] == ':') {
        if (!read_digits(s, pos + 1, 2, ss)) return std::nullopt;
        pos += 3;
        if (pos < s.size() && s[pos] == '.') {
          ++pos;
          const std::size_t digits_start = pos;
          while (pos < s.size() && s[pos] >= '0' && s[pos] <= '9') ++pos;
          if (pos == digits_start) return std::nullopt;
        }
      }
    }
  }
  if (hh > 23 || mi > 59 || ss > 60) return std::nullopt;

  const auto local = local_seconds{sys_days{ymd}.time_since_epoch()} + hours{hh} + minutes{mi} +
                     seconds{ss};
  const std::string_view zone = s.substr(pos);
  sys_seconds utc;
  if (zone.empty()) {
    utc = default_zone.to_utc(local);
  } else if (zone == "Z" || zone == "z") {
    utc = sys_seconds{local.time_since_epoch()};
  } else {
    seconds offset{};
    if (!parse_offset(zone, offset)) return std::nullopt;
    utc = sys_seconds{local.time_since_epoch()} - offset;
  }
  return floor<hours>(utc);
}

std::string format_timestamp(HourStamp t) {
  const auto day = floor<days>(t);
  const year_month_day ymd{day};
  char buf[32];
  std::snprintf(buf, sizeof buf, "%04d-%02u-%02uT%02d:00:00Z", static_cast<int>(ymd.year()),
                static_cast<unsigned>(ymd.month()), static_cast<unsigned>(ymd.day()),
                static_cast<int>((t - day).count()));
  return buf;
}

std::string format_date(Date d) {
  const year_month_day ymd{d};
  char buf[16];
  std::snprintf(buf, sizeof buf, "%04d-%02u-%02u", static_cast<int>(ymd.year()),
                static_cast<unsigned>(ymd.month()), static_cast<unsigned>(ymd.day()));
  return buf;
}

}  // namespace dhdiag::store
