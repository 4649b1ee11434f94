#include "dhdiag/diag/relations.hpp"

#include <random>

#include "dhdiag/diag/parallel.hpp"
#include "dhdiag/stats/correlation.hpp"

namespace dhdiag::diag {

std::string_view to_string(CorrelationMethod m) noexcept {
  return m == CorrelationMethod::kSpearman ? "spearman" : "pearson";
}

std::optional<CorrelationMethod> parse_correlation_method(std::string_view s) noexcept {
  if (s == "pearson") return CorrelationMethod::kPearson;
  if (s == "spearman") return CorrelationMethod::kSpearman;
  return std::nullopt;
}

CorrelationMatrix correlation_matrix(const store::ReadingTable& table, CorrelationMethod method) {
  CorrelationMatrix m;
  m.method = method;
  m.columns = table.column_names();
  const std::size_t n = m.columns.size();
  m.cells.assign(n, std::vector<std::optional<double>>(n));
  m.pair_counts.assign(n, std::vector<std::size_t>(n, 0));

  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i; j < n; ++j) pairs.emplace_back(i, j);

  parallel_for(pairs.size(), [&](std::size_t p) {
    const auto [i, j] = pairs[p];
    const auto& a = table.columns()[i];
    const auto& b = table.columns()[j];
    std::vector<double> x;
    std::vector<double> y;
    for (std::size_t r = 0; r < table.row_count(); ++r) {
      if (a.valid[r] && b.valid[r]) {
        x.push_back(a.values[r]);
        y.push_back(b.values[r]);
      }
    }
    m.pair_counts[i][j] = m.pair_counts[j][i] = x.size();
    std::optional<double> c;
    if (x.size() >= 2) c = method == CorrelationMethod::kPearson ? stats::pearson(x, y) : stats::spearman(x, y);
    if (c && i == j) c = 1.0;
    m.cells[i][j] = m.cells[j][i] = c;
  });
  return m;
}

ScatterSample scatter_sample(const store::ReadingTable& table, std::string_view x_column,
                             std::string_view y_column, std::size_t max_points, std::uint64_t seed) {
  const auto& a = table.column(x_column);
  const auto& b = table.column(y_column);
  ScatterSample s;
  s.x_column = a.name;
  s.y_column = b.name;
  s.seed = seed;
  for (std::size_t r = 0; r < table.row_count(); ++r) s.complete_pairs += (a.valid[r] && b.valid[r]) ? 1 : 0;

  const std::size_t take = std::min(max_points, s.complete_pairs);
  s.sampled = take < s.complete_pairs;
  s.x.reserve(take);
  s.y.reserve(take);

  // Selection sampling: keep each remaining pair with probability needed/remaining.
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::size_t remaining = s.complete_pairs;
  std::size_t needed = take;
  for (std::size_t r = 0; r < table.row_count() && needed > 0; ++r) {
    if (!(a.valid[r] && b.valid[r])) continue;
    const bool keep = !s.sampled || static_cast<double>(remaining) * unit(rng) < static_cast<double>(needed);
    --remaining;
    if (!keep) continue;
    s.x.push_back(a.values[r]);
    s.y.push_back(b.values[r]);
    --needed;
  }
  return s;
}

}  // namespace dhdiag::diag
