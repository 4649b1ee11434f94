#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>

#include "dhdiag/store/reading_table.hpp"
#include "dhdiag/store/schema.hpp"

namespace dhdiag::store {

inline constexpr int kCacheFormatVersion = 1;
inline constexpr std::string_view kIngestVersion = "dhdiag-ingest-1";

struct CacheManifest {
  int format_version = kCacheFormatVersion;
  std::string fingerprint;
  std::size_t row_count = 0;
  std::size_t meter_count = 0;
  std::string schema_json;  // IngestSchema::canonical() of the ingest run
};

// SHA-256 over the ingest version, the canonical schema and the content of
// every source file, in order. Throws IngestError for unreadable files.
std::string source_fingerprint(std::span<const std::filesystem::path> paths,
                               const IngestSchema& schema);

// Writes column files and then the manifest; the manifest marks a complete cache.
CacheManifest cache_write(const ReadingTable& table, const std::filesystem::path& dir,
                          std::string_view fingerprint, const IngestSchema& schema);

struct CachedTable {
  ReadingTable table;
  CacheManifest manifest;
};

// Empty on a miss: no manifest, version or fingerprint mismatch, or corrupt
// files (logged). Without an expected fingerprint any intact cache is a hit.
std::optional<CachedTable> cache_read(const std::filesystem::path& dir,
                                      std::optional<std::string_view> expected_fingerprint);

}  // namespace dhdiag::store
