#include "dhdiag/store/reading_table.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "dhdiag/store/errors.hpp"

namespace dhdiag::store {

std::size_t MeasurementColumn::null_count() const {
  return static_cast<std::size_t>(std::count(valid.begin(), valid.end(), std::uint8_t{0}));
}

ReadingTable::ReadingTable(std::vector<std::string> meter_ids, std::vector<HourStamp> row_times,
                           std::vector<std::uint32_t> row_meters,
                           std::vector<MeasurementColumn> columns)
    : meter_ids_(std::move(meter_ids)),
      row_times_(std::move(row_times)),
      row_meters_(std::move(row_meters)),
      columns_(std::move(columns)) {
  const std::size_t n = row_times_.size();
  if (row_meters_.size() != n) throw std::invalid_argument("table: row vectors differ in length");
  if (!std::is_sorted(meter_ids_.begin(), meter_ids_.end()) ||
      std::adjacent_find(meter_ids_.begin(), meter_ids_.end()) != meter_ids_.end())
    throw std::invalid_argument("table: meter ids must be sorted and unique");
  for (std::size_t c = 0; c < columns_.size(); ++c) {
    const auto& col = columns_[c];
    if (col.values.size() != n || col.valid.size() != n)
      throw std::invalid_argument("table: column '" + col.name + "' has the wrong length");
    for (std::size_t k = 0; k < c; ++k)
      if (columns_[k].name == col.name) throw std::invalid_argument("table: duplicate column " + col.name);
  }

  std::vector<std::size_t> per_meter(meter_ids_.size(), 0);
  for (std::size_t r = 0; r < n; ++r) {
    if (row_meters_[r] >= meter_ids_.size()) throw std::invalid_argument("table: meter index out of range");
    if (r > 0) {
      const bool ordered = row_times_[r - 1] < row_times_[r] ||
                           (row_times_[r - 1] == row_times_[r] && row_meters_[r - 1] < row_meters_[r]);
      if (!ordered) throw std::invalid_argument("table: rows not strictly ordered by (time, meter)");
    }
    if (r == 0 || row_times_[r - 1] != row_times_[r]) {
      timestamps_.push_back(row_times_[r]);
      time_offsets_.push_back(r);
    }
    ++per_meter[row_meters_[r]];
  }
  time_offsets_.push_back(n);
  for (const auto& col : columns_)
    for (std::size_t r = 0; r < n; ++r)
      if (col.valid[r] == 0 ? col.values[r] != 0.0 : !std::isfinite(col.values[r]))
        throw std::invalid_argument("table: column '" + col.name + "' holds a bad cell");

  meter_offsets_.assign(meter_ids_.size() + 1, 0);
  for (std::size_t m = 0; m < meter_ids_.size(); ++m) {
    if (per_meter[m] == 0) throw std::invalid_argument("table: meter without rows: " + meter_ids_[m]);
    meter_offsets_[m + 1] = meter_offsets_[m] + per_meter[m];
  }
  meter_row_index_.resize(n);
  std::vector<std::size_t> cursor(meter_offsets_.begin(), meter_offsets_.end() - 1);
  for (std::size_t r = 0; r < n; ++r) meter_row_index_[cursor[row_meters_[r]]++] = static_cast<std::uint32_t>(r);
}

std::span<const std::uint32_t> ReadingTable::meter_rows(std::uint32_t meter) const {
  if (meter >= meter_ids_.size()) throw std::out_of_range("meter index out of range");
  return std::span<const std::uint32_t>(meter_row_index_)
      .subspan(meter_offsets_[meter], meter_offsets_[meter + 1] - meter_offsets_[meter]);
}

std::vector<std::string> ReadingTable::column_names() const {
  std::vector<std::string> out;
  for (const auto& c : columns_) out.push_back(c.name);
  return out;
}

const MeasurementColumn* ReadingTable::find_column(std::string_view name) const noexcept {
  for (const auto& c : columns_)
    if (c.name == name) return &c;
  return nullptr;
}

const MeasurementColumn& ReadingTable::column(std::string_view name) const {
  if (const auto* c = find_column(name)) return *c;
  throw UnknownColumnError(std::string(name));
}

std::optional<std::uint32_t> ReadingTable::find_meter(std::string_view id) const noexcept {
  const auto it = std::lower_bound(meter_ids_.begin(), meter_ids_.end(), id);
  if (it == meter_ids_.end() || *it != id) return std::nullopt;
  return static_cast<std::uint32_t>(it - meter_ids_.begin());
}

std::uint32_t ReadingTable::meter(std::string_view id) const {
  if (const auto m = find_meter(id)) return *m;
  throw UnknownMeterError(std::string(id));
}

std::optional<HourStamp> ReadingTable::first_time() const noexcept {
  if (timestamps_.empty()) return std::nullopt;
  return timestamps_.front();
}

std::optional<HourStamp> ReadingTable::last_time() const noexcept {
  if (timestamps_.empty()) return std::nullopt;
  return timestamps_.back();
}

bool ReadingTable::operator==(const ReadingTable& other) const {
  return meter_ids_ == other.meter_ids_ && row_times_ == other.row_times_ &&
         row_meters_ == other.row_meters_ && columns_ == other.columns_;
}

TableBuilder::TableBuilder(std::vector<ColumnSpec> columns)
    : specs_(std::move(columns)), values_(specs_.size()) {}

void TableBuilder::add_row(HourStamp time, std::string_view meter_id, std::span<const double> values) {
  if (values.size() != specs_.size()) throw std::invalid_argument("builder: wrong number of values");
  if (meter_names_.empty() || meter_id != last_meter_) {
    const auto [it, inserted] =
        meter_lookup_.try_emplace(std::string(meter_id), static_cast<std::uint32_t>(meter_names_.size()));
    if (inserted) meter_names_.emplace_back(meter_id);
    last_meter_ = meter_id;
    last_meter_id_ = it->second;
  }
  times_.push_back(time.time_since_epoch().count());
  meters_.push_back(last_meter_id_);
  for (std::size_t c = 0; c < specs_.size(); ++c) values_[c].push_back(values[c]);
}

TableBuilder::Result TableBuilder::build() {
  const std::size_t n = times_.size();
  const std::size_t meter_count = meter_names_.size();

  // Rank meters by id so that row order follows the string order.
  std::vector<std::uint32_t> by_name(meter_count);
  std::iota(by_name.begin(), by_name.end(), 0u);
  std::sort(by_name.begin(), by_name.end(),
            [&](std::uint32_t a, std::uint32_t b) { return meter_names_[a] < meter_names_[b]; });
  std::vector<std::uint32_t> rank(meter_count);
  for (std::uint32_t r = 0; r < meter_count; ++r) rank[by_name[r]] = r;

  const std::int64_t t0 = n ? *std::min_element(times_.begin(), times_.end()) : 0;
  auto key = [&](std::size_t i) {
    return static_cast<std::uint64_t>(times_[i] - t0) * meter_count + rank[meters_[i]];
  };

  bool ordered = true;
  for (std::size_t i = 1; i < n && ordered; ++i) ordered = key(i - 1) < key(i);

  std::vector<std::size_t> keep;
  std::size_t duplicates = 0;
  if (!ordered) {
    std::vector<std::pair<std::uint64_t, std::size_t>> keyed(n);
    for (std::size_t i = 0; i < n; ++i) keyed[i] = {key(i), i};
    std::sort(keyed.begin(), keyed.end());
    keep.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
      if (i + 1 < n && keyed[i + 1].first == keyed[i].first) {
        ++duplicates;  // a later row with the same key wins
        continue;
      }
      keep.push_back(keyed[i].second);
    }
  }

  const std::size_t rows = ordered ? n : keep.size();
  std::vector<HourStamp> row_times(rows);
  std::vector<std::uint32_t> row_meters(rows);
  for (std::size_t r = 0; r < rows; ++r) {
    const std::size_t src = ordered ? r : keep[r];
    row_times[r] = HourStamp{std::chrono::hours{times_[src]}};
    row_meters[r] = rank[meters_[src]];
  }

  std::vector<MeasurementColumn> columns;
  columns.reserve(specs_.size());
  for (std::size_t c = 0; c < specs_.size(); ++c) {
    MeasurementColumn col{specs_[c].name, specs_[c].unit, {}, {}};
    if (ordered) {
      col.values = std::move(values_[c]);
    } else {
      col.values.resize(rows);
      for (std::size_t r = 0; r < rows; ++r) col.values[r] = values_[c][keep[r]];
      values_[c] = {};
    }
    col.valid.resize(rows);
    for (std::size_t r = 0; r < rows; ++r) {
      const bool ok = std::isfinite(col.values[r]);
      col.valid[r] = ok ? 1 : 0;
      if (!ok) col.values[r] = 0.0;
    }
    columns.push_back(std::move(col));
  }

  std::vector<std::string> ids(meter_count);
  for (std::uint32_t r = 0; r < meter_count; ++r) ids[r] = meter_names_[by_name[r]];

  times_ = {};
  meters_ = {};
  values_.assign(specs_.size(), {});
  meter_names_.clear();
  meter_lookup_.clear();

  return {ReadingTable(std::move(ids), std::move(row_times), std::move(row_meters), std::move(columns)),
          duplicates};
}

}  // namespace dhdiag::store
