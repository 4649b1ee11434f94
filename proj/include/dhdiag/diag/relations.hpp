#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "dhdiag/store/reading_table.hpp"

namespace dhdiag::diag {

enum class CorrelationMethod { kPearson, kSpearman };
std::string_view to_string(CorrelationMethod m) noexcept;
std::optional<CorrelationMethod> parse_correlation_method(std::string_view s) noexcept;

// Symmetric matrix over all measurement columns, pairwise deletion of nulls.
// A cell is empty when the pair has fewer than 2 complete rows or zero variance;
// this includes the diagonal of a constant or empty column.
struct CorrelationMatrix {
  CorrelationMethod method = CorrelationMethod::kPearson;
  std::vector<std::string> columns;
  std::vector<std::vector<std::optional<double>>> cells;
  std::vector<std::vector<std::size_t>> pair_counts;
};

CorrelationMatrix correlation_matrix(const store::ReadingTable& table, CorrelationMethod method);

inline constexpr std::size_t kDefaultScatterPoints = 100000;

struct ScatterSample {
  std::string x_column;
  std::string y_column;
  std::size_t complete_pairs = 0;  // rows where both cells are non-null
  bool sampled = false;
  std::uint64_t seed = 0;
  std::vector<double> x;
  std::vector<double> y;
};

// Uniform sample without replacement when complete_pairs > max_points, kept in
// row order. Deterministic for a given seed. Throws UnknownColumnError.
ScatterSample scatter_sample(const store::ReadingTable& table, std::string_view x_column,
                             std::string_view y_column, std::size_t max_points = kDefaultScatterPoints,
                             std::uint64_t seed = 0);

}  // namespace dhdiag::diag
