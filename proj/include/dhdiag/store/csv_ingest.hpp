#pragma once

#include <cstddef>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "dhdiag/store/reading_table.hpp"
#include "dhdiag/store/schema.hpp"

namespace dhdiag::store {

inline constexpr std::size_t kMaxErrorSamplesPerFile = 100;

struct LineError {
  std::string file;
  std::size_t line = 0;  // 1-based, header is line 1
  std::string message;
};

// rows_read == rows_accepted + rows_rejected + duplicate_rows
struct IngestReport {
  std::size_t rows_read = 0;
  std::size_t rows_accepted = 0;
  std::size_t rows_rejected = 0;
  std::size_t duplicate_rows = 0;
  std::size_t nonfinite_cells = 0;
  std::vector<LineError> errors;
};

struct IngestResult {
  ReadingTable table;
  IngestReport report;
};

// Parses the files in order (later files win duplicate rows). Malformed rows
// are rejected and counted. Throws IngestError for unreadable files and
// SchemaError when a mapped column is missing from a header.
IngestResult load_csv(std::span<const std::filesystem::path> paths, const IngestSchema& schema);

}  // namespace dhdiag::store
