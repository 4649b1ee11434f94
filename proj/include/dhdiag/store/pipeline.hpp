#pragma once

#include <filesystem>
#include <optional>
#include <span>

#include "dhdiag/store/cache.hpp"
#include "dhdiag/store/csv_ingest.hpp"
#include "dhdiag/store/reading_table.hpp"
#include "dhdiag/store/schema.hpp"

namespace dhdiag::store {

struct IngestOutcome {
  ReadingTable table;
  CacheManifest manifest;
  bool cache_hit = false;
  std::optional<IngestReport> report;  // empty on a cache hit
};

// Reuses the cache in `cache_dir` when it matches the sources and schema,
// otherwise parses the CSV files and rewrites the cache.
IngestOutcome ingest_cached(std::span<const std::filesystem::path> paths, const IngestSchema& schema,
                            const std::filesystem::path& cache_dir);

// Any intact cache. Throws IngestError when the directory holds none.
CachedTable open_cache(const std::filesystem::path& cache_dir);

}  // namespace dhdiag::store
