#include "dhdiag/store/pipeline.hpp"

#include <spdlog/spdlog.h>

#include "dhdiag/store/errors.hpp"

namespace dhdiag::store {

IngestOutcome ingest_cached(std::span<const std::filesystem::path> paths, const IngestSchema& schema,
                            const std::filesystem::path& cache_dir) {
  const auto fingerprint = source_fingerprint(paths, schema);
  if (auto hit = cache_read(cache_dir, fingerprint)) {
    spdlog::info("cache hit in {} ({} rows)", cache_dir.string(), hit->manifest.row_count);
    return {std::move(hit->table), std::move(hit->manifest), true, std::nullopt};
  }
  auto loaded = load_csv(paths, schema);
  auto manifest = cache_write(loaded.table, cache_dir, fingerprint, schema);
  return {std::move(loaded.table), std::move(manifest), false, std::move(loaded.report)};
}

CachedTable open_cache(const std::filesystem::path& cache_dir) {
  auto hit = cache_read(cache_dir, std::nullopt);
  if (!hit) throw IngestError("no usable cache in " + cache_dir.string());
  return std::move(*hit);
}

}  // namespace dhdiag::store
