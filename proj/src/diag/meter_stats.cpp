#include "dhdiag/diag/meter_stats.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>

#include "dhdiag/diag/parallel.hpp"
#include "dhdiag/stats/anomaly.hpp"
#include "dhdiag/stats/medcouple.hpp"
#include "dhdiag/stats/robust.hpp"
#include "dhdiag/stats/sample.hpp"
#include "dhdiag/store/activity.hpp"

namespace dhdiag::diag {

MeterStatsTable compute_meter_stats(const store::ReadingTable& table, const DiagnosticsOptions& options) {
  MeterStatsTable out;
  out.columns = table.column_names();
  out.rows.resize(table.meter_count());
  const auto activity = store::meter_activity(table, options.window_mode);

  parallel_for(table.meter_count(), [&](std::size_t m) {
    const auto& a = activity[m];
    const auto rows = table.meter_rows(static_cast<std::uint32_t>(m));
    MeterStatsRow& row = out.rows[m];
    row.meter_id = a.meter_id;
    row.first_seen = a.first_seen;
    row.last_seen = a.last_seen;
    row.expected_count = a.expected_count;
    row.present_count = a.present_count;

    std::size_t missing_cells = 0;
    std::size_t non_null_cells = 0;
    std::size_t anomalies = 0;
    std::vector<double> values;
    for (const auto& col : table.columns()) {
      ColumnMeterStats c;
      values.clear();
      for (const auto r : rows) {
        if (!col.valid[r]) continue;
        values.push_back(col.values[r]);
      }
      c.non_null_count = values.size();
      c.missing_count = a.expected_count - values.size();
      c.null_rate = static_cast<double>(c.missing_count) / static_cast<double>(a.expected_count);
      for (const double v : values) {
        c.negative_count += v < 0.0 ? 1 : 0;
        for (const auto& rule : options.rules)
          if (rule.column == col.name && rule.violated_by(v)) ++c.violation_count;
      }
      const stats::SortedSample sample(std::move(values));
      if (const auto s = stats::robust_summary(sample)) {
        const auto an = stats::count_anomalies(sample.values(), *s, options.anomaly_threshold);
        c.anomaly_rate = an.anomaly_rate;
        c.mean = s->mean;
        c.median = s->median;
        c.mad = s->mad;
        c.medcouple = stats::medcouple(sample).value;
        c.min = s->min;
        c.max = s->max;
        anomalies += an.anomaly_count;
      }
      missing_cells += c.missing_count;
      non_null_cells += c.non_null_count;
      row.columns.push_back(c);
    }
    const std::size_t cells = a.expected_count * table.columns().size();
    row.null_rate = cells == 0 ? 0.0 : static_cast<double>(missing_cells) / static_cast<double>(cells);
    if (non_null_cells > 0) row.anomaly_rate = static_cast<double>(anomalies) / static_cast<double>(non_null_cells);
  });
  return out;
}

namespace {

enum Kind : int {
  kMeterId,
  kFirstSeen,
  kLastSeen,
  kPresentCount,
  kExpectedCount,
  kMeterNullRate,
  kMeterAnomalyRate,
  kColNullRate,
  kColAnomalyRate,
  kColMean,
  kColMedian,
  kColMad,
  kColMedcouple,
  kColMin,
  kColMax,
  kColNegativeCount,
  kColViolationCount,
  kColNonNullCount,
  kColMissingCount,
};

struct NamedKind {
  std::string_view name;
  Kind kind;
};

constexpr NamedKind kMeterFields[] = {
    {"meter_id", kMeterId},           {"first_seen", kFirstSeen},         {"last_seen", kLastSeen},
    {"present_count", kPresentCount}, {"expected_count", kExpectedCount}, {"null_rate", kMeterNullRate},
    {"anomaly_rate", kMeterAnomalyRate},
};

constexpr NamedKind kColumnFields[] = {
    {"null_rate", kColNullRate},
    {"anomaly_rate", kColAnomalyRate},
    {"mean", kColMean},
    {"median", kColMedian},
    {"mad", kColMad},
    {"medcouple", kColMedcouple},
    {"min", kColMin},
    {"max", kColMax},
    {"negative_count", kColNegativeCount},
    {"violation_count", kColViolationCount},
    {"non_null_count", kColNonNullCount},
    {"missing_count", kColMissingCount},
};

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

std::string lower(std::string_view s) {
  std::string out(s);
  for (auto& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

double hours_since_epoch(store::HourStamp t) { return static_cast<double>(t.time_since_epoch().count()); }

}  // namespace

FieldRef FieldRef::parse(std::string_view text, const std::vector<std::string>& columns) {
  const std::string_view t = trim(text);
  FieldRef f;
  f.name_ = std::string(t);
  const auto dot = t.rfind('.');
  if (dot == std::string_view::npos) {
    for (const auto& k : kMeterFields)
      if (k.name == t) {
        f.kind_ = k.kind;
        return f;
      }
    throw FilterError(std::string(text), "unknown field '" + std::string(t) + "'");
  }
  const std::string_view col = t.substr(0, dot);
  const std::string_view stat = t.substr(dot + 1);
  const auto it = std::find(columns.begin(), columns.end(), col);
  if (it == columns.end()) throw FilterError(std::string(text), "unknown column '" + std::string(col) + "'");
  f.column_ = static_cast<std::size_t>(it - columns.begin());
  for (const auto& k : kColumnFields)
    if (k.name == stat) {
      f.kind_ = k.kind;
      return f;
    }
  throw FilterError(std::string(text), "unknown statistic '" + std::string(stat) + "'");
}

bool FieldRef::is_text() const noexcept { return kind_ == kMeterId; }
bool FieldRef::is_time() const noexcept { return kind_ == kFirstSeen || kind_ == kLastSeen; }

std::optional<FieldRef::Value> FieldRef::get(const MeterStatsRow& row) const {
  auto num = [](std::optional<double> v) -> std::optional<Value> {
    if (!v) return std::nullopt;
    return Value{*v};
  };
  auto count = [](std::size_t v) -> std::optional<Value> { return Value{static_cast<double>(v)}; };
  switch (static_cast<Kind>(kind_)) {
    case kMeterId: return Value{row.meter_id};
    case kFirstSeen: return num(hours_since_epoch(row.first_seen));
    case kLastSeen: return num(hours_since_epoch(row.last_seen));
    case kPresentCount: return count(row.present_count);
    case kExpectedCount: return count(row.expected_count);
    case kMeterNullRate: return num(row.null_rate);
    case kMeterAnomalyRate: return num(row.anomaly_rate);
    default: break;
  }
  const auto& c = row.columns.at(column_);
  switch (static_cast<Kind>(kind_)) {
    case kColNullRate: return Value{c.null_rate};
    case kColAnomalyRate: return num(c.anomaly_rate);
    case kColMean: return num(c.mean);
    case kColMedian: return num(c.median);
    case kColMad: return num(c.mad);
    case kColMedcouple: return num(c.medcouple);
    case kColMin: return num(c.min);
    case kColMax: return num(c.max);
    case kColNegativeCount: return count(c.negative_count);
    case kColViolationCount: return count(c.violation_count);
    case kColNonNullCount: return count(c.non_null_count);
    case kColMissingCount: return count(c.missing_count);
    default: break;
  }
  return std::nullopt;
}

namespace {

struct OpToken {
  std::string_view text;
  CompareOp op;
};

// Longest tokens first so "<=" wins over "<".
constexpr OpToken kOps[] = {
    {"<=", CompareOp::kLessEqual}, {">=", CompareOp::kGreaterEqual}, {"!=", CompareOp::kNotEqual},
    {"==", CompareOp::kEqual},     {"≤", CompareOp::kLessEqual}, {"≥", CompareOp::kGreaterEqual},
    {"≠", CompareOp::kNotEqual}, {"<", CompareOp::kLess},        {">", CompareOp::kGreater},
    {"=", CompareOp::kEqual},
};

template <typename T>
bool compare(const T& a, CompareOp op, const T& b) {
  switch (op) {
    case CompareOp::kLess: return a < b;
    case CompareOp::kLessEqual: return a <= b;
    case CompareOp::kGreater: return a > b;
    case CompareOp::kGreaterEqual: return a >= b;
    case CompareOp::kEqual: return a == b;
    case CompareOp::kNotEqual: return a != b;
  }
  return false;
}

std::vector<std::string_view> split_conjunction(std::string_view text) {
  std::vector<std::string_view> parts;
  std::size_t start = 0;
  std::size_t i = 0;
  auto boundary = [&](std::size_t pos) {
    return pos >= text.size() || std::isspace(static_cast<unsigned char>(text[pos]));
  };
  while (i < text.size()) {
    if (text.compare(i, 2, "&&") == 0) {
      parts.push_back(text.substr(start, i - start));
      i += 2;
      start = i;
      continue;
    }
    if (i > 0 && std::isspace(static_cast<unsigned char>(text[i - 1])) && i + 3 <= text.size() &&
        lower(text.substr(i, 3)) == "and" && boundary(i + 3)) {
      parts.push_back(text.substr(start, i - start));
      i += 3;
      start = i;
      continue;
    }
    ++i;
  }
  parts.push_back(text.substr(start));
  return parts;
}

FieldRef::Value parse_literal(const FilterTerm& term, std::string_view raw) {
  std::string_view lit = trim(raw);
  if (lit.empty()) throw FilterError(term.text, "missing value");
  const bool quoted = lit.size() >= 2 && (lit.front() == '"' || lit.front() == '\'') && lit.back() == lit.front();
  if (quoted) lit = lit.substr(1, lit.size() - 2);
  if (term.field.is_text()) return std::string(lit);
  if (term.field.is_time()) {
    const auto t = store::parse_timestamp(lit, store::TimeZoneRule::utc());
    if (!t) throw FilterError(term.text, "expected an ISO 8601 timestamp");
    return hours_since_epoch(*t);
  }
  double v = 0.0;
  std::string_view num = lit;
  if (!num.empty() && num.front() == '+') num.remove_prefix(1);
  bool percent = false;
  if (!num.empty() && num.back() == '%') {
    percent = true;
    num.remove_suffix(1);
  }
  const auto [ptr, ec] = std::from_chars(num.data(), num.data() + num.size(), v);
  if (quoted || ec != std::errc{} || ptr != num.data() + num.size() || !std::isfinite(v))
    throw FilterError(term.text, "expected a number");
  return percent ? v / 100.0 : v;
}

}  // namespace

MeterFilter MeterFilter::parse(std::string_view text, const std::vector<std::string>& columns) {
  MeterFilter f;
  if (trim(text).empty()) return f;
  for (const auto part : split_conjunction(text)) {
    const std::string_view term = trim(part);
    if (term.empty()) throw FilterError(std::string(text), "empty term");
    std::size_t at = std::string_view::npos;
    const OpToken* found = nullptr;
    for (std::size_t i = 0; i < term.size() && !found; ++i)
      for (const auto& op : kOps)
        if (term.compare(i, op.text.size(), op.text) == 0) {
          at = i;
          found = &op;
          break;
        }
    if (!found) throw FilterError(std::string(term), "expected 'field op value'");
    FilterTerm t;
    t.text = std::string(term);
    t.op = found->op;
    const auto field_text = trim(term.substr(0, at));
    if (field_text.empty()) throw FilterError(t.text, "missing field");
    try {
      t.field = FieldRef::parse(field_text, columns);
    } catch (const FilterError& e) {
      throw FilterError(t.text, e.reason());
    }
    t.literal = parse_literal(t, term.substr(at + found->text.size()));
    f.terms_.push_back(std::move(t));
  }
  return f;
}

bool MeterFilter::matches(const MeterStatsRow& row) const {
  for (const auto& t : terms_) {
    const auto v = t.field.get(row);
    if (!v) return false;
    const bool ok = std::visit(
        [&](const auto& a) {
          using A = std::decay_t<decltype(a)>;
          return compare<A>(a, t.op, std::get<A>(t.literal));
        },
        *v);
    if (!ok) return false;
  }
  return true;
}

MeterSort MeterSort::parse(std::string_view text, const std::vector<std::string>& columns) {
  std::string_view t = trim(text);
  if (t.empty()) t = "meter_id";
  MeterSort s{FieldRef::parse("meter_id", columns), false};
  if (t.front() == '-' || t.front() == '+') {
    s.descending = t.front() == '-';
    t.remove_prefix(1);
  } else if (const auto sp = t.find_last_of(" \t"); sp != std::string_view::npos) {
    const std::string dir = lower(trim(t.substr(sp + 1)));
    if (dir != "asc" && dir != "desc") throw FilterError(std::string(text), "sort direction must be asc or desc");
    s.descending = dir == "desc";
    t = trim(t.substr(0, sp));
  }
  s.field = FieldRef::parse(t, columns);
  return s;
}

namespace {

std::vector<const MeterStatsRow*> matching(const MeterStatsTable& stats, const MeterFilter& filter) {
  std::vector<const MeterStatsRow*> out;
  for (const auto& r : stats.rows)
    if (filter.matches(r)) out.push_back(&r);
  return out;
}

}  // namespace

MeterStatsPage query_meter_stats(const MeterStatsTable& stats, const MeterQuery& query) {
  if (query.page_size == 0) throw std::invalid_argument("page_size must be positive");
  const auto filter = MeterFilter::parse(query.filter, stats.columns);
  const auto sort = MeterSort::parse(query.sort, stats.columns);
  auto rows = matching(stats, filter);

  std::vector<std::optional<FieldRef::Value>> keys(stats.rows.size());
  for (const auto* r : rows) keys[static_cast<std::size_t>(r - stats.rows.data())] = sort.field.get(*r);
  auto key = [&](const MeterStatsRow* r) -> const std::optional<FieldRef::Value>& {
    return keys[static_cast<std::size_t>(r - stats.rows.data())];
  };
  std::stable_sort(rows.begin(), rows.end(), [&](const MeterStatsRow* a, const MeterStatsRow* b) {
    const auto& ka = key(a);
    const auto& kb = key(b);
    if (ka.has_value() != kb.has_value()) return ka.has_value();
    if (ka && *ka != *kb) return sort.descending ? *kb < *ka : *ka < *kb;
    return a->meter_id < b->meter_id;
  });

  MeterStatsPage page;
  page.total_matching = rows.size();
  page.page = query.page;
  page.page_size = query.page_size;
  const std::size_t pages = (rows.size() + query.page_size - 1) / query.page_size;
  if (query.page < pages) {
    const std::size_t begin = query.page * query.page_size;
    const std::size_t end = std::min(rows.size(), begin + query.page_size);
    for (std::size_t i = begin; i < end; ++i) page.rows.push_back(*rows[i]);
  }
  return page;
}

std::vector<std::string> select_meters(const MeterStatsTable& stats, std::string_view filter) {
  const auto f = MeterFilter::parse(filter, stats.columns);
  std::vector<std::string> ids;
  for (const auto* r : matching(stats, f)) ids.push_back(r->meter_id);
  std::sort(ids.begin(), ids.end());
  return ids;
}

std::string export_meter_list(std::vector<std::string> meter_ids) {
  std::sort(meter_ids.begin(), meter_ids.end());
  std::string out = "meter_id\n";
  for (const auto& id : meter_ids) {
    if (id.find_first_of(",\"\r\n") == std::string::npos) {
      out += id;
    } else {
      out += '"';
      for (const char c : id) {
        if (c == '"') out += '"';
        out += c;
      }
      out += '"';
    }
    out += '\n';
  }
  return out;
}

std::vector<std::string> parse_meter_list(std::string_view csv) {
  std::vector<std::string> ids;
  std::size_t i = csv.find('\n');
  if (i == std::string_view::npos) return ids;
  ++i;
  while (i < csv.size()) {
    std::string id;
    if (csv[i] == '"') {
      ++i;
      while (i < csv.size()) {
        if (csv[i] == '"') {
          if (i + 1 < csv.size() && csv[i + 1] == '"') {
            id += '"';
            i += 2;
            continue;
          }
          ++i;
          break;
        }
        id += csv[i++];
      }
      i = csv.find('\n', i);
    } else {
      const std::size_t nl = csv.find('\n', i);
      id = std::string(csv.substr(i, nl == std::string_view::npos ? csv.npos : nl - i));
      i = nl;
    }
    ids.push_back(std::move(id));
    if (i == std::string_view::npos) break;
    ++i;
  }
  return ids;
}

}  // namespace dhdiag::diag
