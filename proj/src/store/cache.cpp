#include "dhdiag/store/cache.hpp"

#include <nlohmann/json.hpp>
#include <spdlog/spdlog.h>

#include <bit>
#include <cstring>
#include <fstream>
#include <system_error>

#include "dhdiag/store/errors.hpp"
#include "sha256.hpp"

namespace dhdiag::store {
namespace fs = std::filesystem;
using nlohmann::ordered_json;

static_assert(std::endian::native == std::endian::little, "cache files are little-endian");

namespace {

constexpr char kMagic[4] = {'D', 'H', 'D', 'C'};
constexpr const char* kManifestName = "manifest.json";

class CorruptCache : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class Writer {
 public:
  explicit Writer(std::uint64_t count) {
    bytes_.append(kMagic, 4);
    put(static_cast<std::uint32_t>(kCacheFormatVersion));
    put(count);
  }
  template <typename T>
  void put(const T& v) {
    bytes_.append(reinterpret_cast<const char*>(&v), sizeof v);
  }
  template <typename T>
  void put_array(const std::vector<T>& v) {
    bytes_.append(reinterpret_cast<const char*>(v.data()), v.size() * sizeof(T));
  }
  void put_string(const std::string& s) {
    put(static_cast<std::uint32_t>(s.size()));
    bytes_.append(s);
  }
  const std::string& bytes() const { return bytes_; }

 private:
  std::string bytes_;
};

class Reader {
 public:
  explicit Reader(std::string bytes) : bytes_(std::move(bytes)) {
    if (bytes_.size() < 16 || std::memcmp(bytes_.data(), kMagic, 4) != 0) throw CorruptCache("bad magic");
    pos_ = 4;
    if (get<std::uint32_t>() != kCacheFormatVersion) throw CorruptCache("file version mismatch");
    count_ = get<std::uint64_t>();
  }
  std::uint64_t count() const { return count_; }
  template <typename T>
  T get() {
    need(sizeof(T));
    T v;
    std::memcpy(&v, bytes_.data() + pos_, sizeof v);
    pos_ += sizeof v;
    return v;
  }
  template <typename T>
  std::vector<T> get_array(std::uint64_t n) {
    if (n > bytes_.size() / sizeof(T)) throw CorruptCache("truncated file");
    need(n * sizeof(T));
    std::vector<T> v(n);
    std::memcpy(v.data(), bytes_.data() + pos_, n * sizeof(T));
    pos_ += n * sizeof(T);
    return v;
  }
  std::string get_string() {
    const auto n = get<std::uint32_t>();
    need(n);
    std::string s = bytes_.substr(pos_, n);
    pos_ += n;
    return s;
  }
  void finish() const {
    if (pos_ != bytes_.size()) throw CorruptCache("trailing bytes");
  }

 private:
  void need(std::size_t n) const {
    if (bytes_.size() - pos_ < n) throw CorruptCache("truncated file");
  }
  std::string bytes_;
  std::size_t pos_ = 0;
  std::uint64_t count_ = 0;
};

std::string read_file(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw CorruptCache("missing " + p.filename().string());
  in.seekg(0, std::ios::end);
  const auto size = in.tellg();
  in.seekg(0);
  std::string s(static_cast<std::size_t>(size), '\0');
  in.read(s.data(), size);
  if (!in) throw CorruptCache("cannot read " + p.filename().string());
  return s;
}

void write_file(const fs::path& p, const std::string& bytes) {
  std::ofstream out(p, std::ios::binary | std::ios::trunc);
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  out.close();
  if (!out) throw IngestError("cannot write cache file " + p.string());
}

std::string digest(const std::string& bytes) {
  detail::Sha256 h;
  h.update(bytes);
  return h.hex();
}

std::string column_file(std::size_t i) { return "col_" + std::to_string(i) + ".bin"; }

}  // namespace

std::string source_fingerprint(std::span<const fs::path> paths, const IngestSchema& schema) {
  detail::Sha256 h;
  const auto put_len = [&](std::uint64_t n) { h.update(&n, sizeof n); };
  h.update(kIngestVersion);
  const std::string canon = schema.canonical();
  put_len(canon.size());
  h.update(canon);
  std::vector<char> buf(std::size_t{1} << 20);
  for (const auto& p : paths) {
    std::ifstream in(p, std::ios::binary);
    if (!in) throw IngestError("cannot open " + p.string());
    std::uint64_t total = 0;
    while (in) {
      in.read(buf.data(), static_cast<std::streamsize>(buf.size()));
      const auto got = static_cast<std::size_t>(in.gcount());
      h.update(buf.data(), got);
      total += got;
    }
    if (in.bad()) throw IngestError("read failure in " + p.string());
    put_len(total);
  }
  return h.hex();
}

CacheManifest cache_write(const ReadingTable& table, const fs::path& dir, std::string_view fingerprint,
                          const IngestSchema& schema) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw IngestError("cannot create cache directory " + dir.string() + ": " + ec.message());
  fs::remove(dir / kManifestName, ec);

  const std::uint64_t rows = table.row_count();
  ordered_json files = ordered_json::object();
  const auto emit = [&](const std::string& name, const Writer& w) {
    write_file(dir / name, w.bytes());
    files[name] = {{"size", w.bytes().size()}, {"sha256", digest(w.bytes())}};
  };

  {
    Writer w(rows);
    std::vector<std::int64_t> hours(rows);
    for (std::size_t r = 0; r < rows; ++r) hours[r] = table.row_times()[r].time_since_epoch().count();
    w.put_array(hours);
    emit("times.bin", w);
  }
  {
    Writer w(rows);
    w.put_array(std::vector<std::uint32_t>(table.row_meters().begin(), table.row_meters().end()));
    emit("meters.bin", w);
  }
  {
    Writer w(table.meter_count());
    for (const auto& id : table.meter_ids()) w.put_string(id);
    emit("meter_ids.bin", w);
  }
  ordered_json columns = ordered_json::array();
  for (std::size_t i = 0; i < table.columns().size(); ++i) {
    const auto& col = table.columns()[i];
    Writer w(rows);
    w.put_array(col.values);
    w.put_array(col.valid);
    emit(column_file(i), w);
    columns.push_back({{"name", col.name}, {"unit", col.unit}, {"file", column_file(i)}});
  }

  CacheManifest manifest;
  manifest.fingerprint = std::string(fingerprint);
  manifest.row_count = rows;
  manifest.meter_count = table.meter_count();
  manifest.schema_json = schema.canonical();

  ordered_json m;
  m["format_version"] = kCacheFormatVersion;
  m["ingest_version"] = kIngestVersion;
  m["fingerprint"] = manifest.fingerprint;
  m["row_count"] = manifest.row_count;
  m["meter_count"] = manifest.meter_count;
  m["schema"] = ordered_json::parse(manifest.schema_json);
  m["columns"] = std::move(columns);
  m["files"] = std::move(files);

  const fs::path tmp = dir / "manifest.json.tmp";
  write_file(tmp, m.dump(2) + "\n");
  fs::rename(tmp, dir / kManifestName, ec);
  if (ec) throw IngestError("cannot finalize cache manifest: " + ec.message());
  return manifest;
}

std::optional<CachedTable> cache_read(const fs::path& dir, std::optional<std::string_view> expected_fingerprint) {
  const fs::path manifest_path = dir / kManifestName;
  std::error_code ec;
  if (!fs::exists(manifest_path, ec)) return std::nullopt;

  try {
    const auto m = ordered_json::parse(read_file(manifest_path));
    if (m.at("format_version").get<int>() != kCacheFormatVersion ||
        m.at("ingest_version").get<std::string>() != kIngestVersion) {
      spdlog::info("cache: version mismatch in {}, ignoring", dir.string());
      return std::nullopt;
    }
    CacheManifest manifest;
    manifest.fingerprint = m.at("fingerprint").get<std::string>();
    if (expected_fingerprint && *expected_fingerprint != manifest.fingerprint) {
      spdlog::info("cache: stale fingerprint in {}", dir.string());
      return std::nullopt;
    }
    manifest.row_count = m.at("row_count").get<std::size_t>();
    manifest.meter_count = m.at("meter_count").get<std::size_t>();
    manifest.schema_json = m.at("schema").dump();

    const auto& files = m.at("files");
    const auto load = [&](const std::string& name) {
      std::string bytes = read_file(dir / name);
      const auto& meta = files.at(name);
      if (bytes.size() != meta.at("size").get<std::size_t>() || digest(bytes) != meta.at("sha256").get<std::string>())
        throw CorruptCache("checksum mismatch in " + name);
      Reader r(std::move(bytes));
      return r;
    };

    const std::uint64_t rows = manifest.row_count;
    Reader times = load("times.bin");
    if (times.count() != rows) throw CorruptCache("row count mismatch");
    const auto hours = times.get_array<std::int64_t>(rows);
    times.finish();
    std::vector<HourStamp> row_times(rows);
    for (std::size_t r = 0; r < rows; ++r) row_times[r] = HourStamp{std::chrono::hours{hours[r]}};

    Reader meters = load("meters.bin");
    if (meters.count() != rows) throw CorruptCache("row count mismatch");
    auto row_meters = meters.get_array<std::uint32_t>(rows);
    meters.finish();

    Reader ids = load("meter_ids.bin");
    if (ids.count() != manifest.meter_count) throw CorruptCache("meter count mismatch");
    std::vector<std::string> meter_ids;
    meter_ids.reserve(ids.count());
    for (std::uint64_t i = 0; i < ids.count(); ++i) meter_ids.push_back(ids.get_string());
    ids.finish();

    std::vector<MeasurementColumn> columns;
    for (const auto& c : m.at("columns")) {
      Reader r = load(c.at("file").get<std::string>());
      if (r.count() != rows) throw CorruptCache("row count mismatch");
      MeasurementColumn col{c.at("name").get<std::string>(), c.at("unit").get<std::string>(), {}, {}};
      col.values = r.get_array<double>(rows);
      col.valid = r.get_array<std::uint8_t>(rows);
      r.finish();
      columns.push_back(std::move(col));
    }

    ReadingTable table(std::move(meter_ids), std::move(row_times), std::move(row_meters), std::move(columns));
    return CachedTable{std::move(table), std::move(manifest)};
  } catch (const std::exception& e) {
    spdlog::warn("cache: corrupt cache in {} ({}), re-ingesting", dir.string(), e.what());
    return std::nullopt;
  }
}

}  // namespace dhdiag::store
