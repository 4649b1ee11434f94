#include "dhdiag/store/csv_ingest.hpp"

#include <spdlog/spdlog.h>

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <optional>

#include "dhdiag/store/errors.hpp"

namespace dhdiag::store {
namespace {

constexpr std::size_t kChunkBytes = std::size_t{4} << 20;
constexpr double kNull = std::numeric_limits<double>::quiet_NaN();

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

// Splits one record. Quoted fields may contain commas and doubled quotes but
// not line breaks. `scratch` owns unescaped text of quoted fields.
void split_fields(std::string_view line, std::vector<std::string_view>& out,
                  std::vector<std::string>& scratch) {
  out.clear();
  scratch.clear();
  if (line.find('"') == std::string_view::npos) {
    std::size_t i = 0;
    while (true) {
      const std::size_t comma = line.find(',', i);
      out.push_back(trim(line.substr(i, comma == std::string_view::npos ? line.npos : comma - i)));
      if (comma == std::string_view::npos) return;
      i = comma + 1;
    }
  }
  std::vector<std::ptrdiff_t> quoted;  // index into scratch, or -1
  std::size_t i = 0;
  while (true) {
    std::size_t start = i;
    while (start < line.size() && line[start] == ' ') ++start;
    std::size_t comma;
    if (start < line.size() && line[start] == '"') {
      std::string text;
      std::size_t j = start + 1;
      for (; j < line.size(); ++j) {
        if (line[j] == '"') {
          if (j + 1 < line.size() && line[j + 1] == '"') {
            text.push_back('"');
            ++j;
            continue;
          }
          break;
        }
        text.push_back(line[j]);
      }
      quoted.push_back(static_cast<std::ptrdiff_t>(scratch.size()));
      scratch.push_back(std::move(text));
      out.emplace_back();
      comma = line.find(',', j);
    } else {
      comma = line.find(',', i);
      quoted.push_back(-1);
      out.push_back(trim(line.substr(i, comma == std::string_view::npos ? line.npos : comma - i)));
    }
    if (comma == std::string_view::npos) break;
    i = comma + 1;
  }
  for (std::size_t k = 0; k < out.size(); ++k)
    if (quoted[k] >= 0) out[k] = scratch[static_cast<std::size_t>(quoted[k])];
}

enum class CellKind { kValue, kNull, kNonFinite, kBad };

struct Cell {
  CellKind kind;
  double value;
};

class FileParser {
 public:
  FileParser(const IngestSchema& schema, TableBuilder& builder, IngestReport& report,
             const TimeZoneRule& zone)
      : schema_(schema), builder_(builder), report_(report), zone_(zone),
        row_values_(schema.measurements.size()) {}

  void parse(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IngestError("cannot open " + path.string());
    file_ = path.string();
    line_no_ = 0;
    file_errors_ = 0;
    have_header_ = false;

    std::string buffer;
    std::vector<char> chunk(kChunkBytes);
    while (true) {
      in.read(chunk.data(), static_cast<std::streamsize>(chunk.size()));
      const auto got = static_cast<std::size_t>(in.gcount());
      if (got == 0) break;
      buffer.append(chunk.data(), got);
      std::size_t pos = 0;
      while (true) {
        const std::size_t nl = buffer.find('\n', pos);
        if (nl == std::string::npos) break;
        line(std::string_view(buffer).substr(pos, nl - pos));
        pos = nl + 1;
      }
      buffer.erase(0, pos);
      if (!in) break;
    }
    if (in.bad()) throw IngestError("read failure in " + file_);
    if (!buffer.empty()) line(buffer);
    if (!have_header_) throw SchemaError(file_ + ": missing header row");
  }

 private:
  void line(std::string_view text) {
    ++line_no_;
    if (line_no_ == 1 && text.starts_with("\xEF\xBB\xBF")) text.remove_prefix(3);
    if (!text.empty() && text.back() == '\r') text.remove_suffix(1);
    if (trim(text).empty()) return;
    if (!have_header_) {
      header(text);
      return;
    }
    ++report_.rows_read;
    split_fields(text, fields_, scratch_);
    if (fields_.size() != width_) {
      reject("expected " + std::to_string(width_) + " fields, found " + std::to_string(fields_.size()));
      return;
    }
    const std::string_view ts = fields_[ts_index_];
    if (ts != last_ts_text_ || !last_ts_) {
      last_ts_text_.assign(ts);
      last_ts_ = parse_timestamp(ts, zone_);
    }
    if (!last_ts_) {
      reject("bad timestamp '" + std::string(ts) + "'");
      return;
    }
    const std::string_view meter = fields_[meter_index_];
    if (meter.empty()) {
      reject("empty meter id");
      return;
    }
    std::size_t nonfinite = 0;
    for (std::size_t c = 0; c < value_index_.size(); ++c) {
      const Cell cell = parse_cell(fields_[value_index_[c]]);
      switch (cell.kind) {
        case CellKind::kValue: row_values_[c] = cell.value; break;
        case CellKind::kNull: row_values_[c] = kNull; break;
        case CellKind::kNonFinite:
          row_values_[c] = kNull;
          ++nonfinite;
          break;
        case CellKind::kBad:
          reject("column " + schema_.measurements[c].source + ": not a number '" +
                 std::string(fields_[value_index_[c]]) + "'");
          return;
      }
    }
    report_.nonfinite_cells += nonfinite;
    builder_.add_row(*last_ts_, meter, row_values_);
  }

  void header(std::string_view text) {
    have_header_ = true;
    split_fields(text, fields_, scratch_);
    width_ = fields_.size();
    auto find = [&](const std::string& name) -> std::size_t {
      const auto it = std::find(fields_.begin(), fields_.end(), name);
      if (it == fields_.end()) throw SchemaError(file_ + ": missing column '" + name + "'");
      return static_cast<std::size_t>(it - fields_.begin());
    };
    ts_index_ = find(schema_.timestamp_source);
    meter_index_ = find(schema_.meter_id_source);
    value_index_.clear();
    for (const auto& m : schema_.measurements) value_index_.push_back(find(m.source));
  }

  Cell parse_cell(std::string_view f) const {
    if (f.empty()) return {CellKind::kNull, 0.0};
    for (const auto& s : schema_.null_sentinels)
      if (f == s) return {CellKind::kNull, 0.0};
    std::string_view num = f;
    if (num.front() == '+') num.remove_prefix(1);
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(num.data(), num.data() + num.size(), v);
    if (ptr != num.data() + num.size()) return {CellKind::kBad, 0.0};
    if (ec == std::errc::result_out_of_range) return {CellKind::kNonFinite, 0.0};
    if (ec != std::errc{}) return {CellKind::kBad, 0.0};
    if (!std::isfinite(v)) return {CellKind::kNonFinite, 0.0};
    return {CellKind::kValue, v};
  }

  void reject(std::string message) {
    ++report_.rows_rejected;
    if (file_errors_ < kMaxErrorSamplesPerFile) {
      report_.errors.push_back({file_, line_no_, std::move(message)});
      ++file_errors_;
    }
  }

  const IngestSchema& schema_;
  TableBuilder& builder_;
  IngestReport& report_;
  const TimeZoneRule& zone_;

  std::string file_;
  std::size_t line_no_ = 0;
  std::size_t file_errors_ = 0;
  bool have_header_ = false;
  std::size_t width_ = 0;
  std::size_t ts_index_ = 0;
  std::size_t meter_index_ = 0;
  std::vector<std::size_t> value_index_;
  std::vector<std::string_view> fields_;
  std::vector<std::string> scratch_;
  std::vector<double> row_values_;
  std::string last_ts_text_;
  std::optional<HourStamp> last_ts_;
};

}  // namespace

IngestResult load_csv(std::span<const std::filesystem::path> paths, const IngestSchema& schema) {
  const TimeZoneRule zone = [&] {
    try {
      return TimeZoneRule::parse(schema.default_timezone);
    } catch (const std::invalid_argument& e) {
      throw SchemaError(e.what());
    }
  }();

  std::vector<ColumnSpec> specs;
  for (const auto& m : schema.measurements) specs.push_back({m.name, m.unit});
  TableBuilder builder(std::move(specs));
  IngestReport report;
  FileParser parser(schema, builder, report, zone);
  for (const auto& p : paths) {
    spdlog::debug("ingest: reading {}", p.string());
    parser.parse(p);
  }

  auto built = builder.build();
  report.duplicate_rows = built.duplicate_rows;
  report.rows_accepted = built.table.row_count();

  if (report.rows_rejected > 0) spdlog::warn("ingest: {} malformed rows rejected", report.rows_rejected);
  if (report.nonfinite_cells > 0)
    spdlog::warn("ingest: {} non-finite cells stored as null", report.nonfinite_cells);
  if (report.duplicate_rows > 0)
    spdlog::info("ingest: {} duplicate rows replaced by later occurrences", report.duplicate_rows);
  return {std::move(built.table), std::move(report)};
}

}  // namespace dhdiag::store
