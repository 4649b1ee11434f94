#pragma once

#include <optional>
#include <span>
#include <vector>

namespace dhdiag::stats {

// Product-moment correlation. Absent when n < 2 or either variance is zero.
// Throws std::invalid_argument on length mismatch.
std::optional<double> pearson(std::span<const double> x, std::span<const double> y);

// Pearson on average ranks.
std::optional<double> spearman(std::span<const double> x, std::span<const double> y);

// 1-based ranks; tied values share the average of their positions.
std::vector<double> average_ranks(std::span<const double> values);

}  // namespace dhdiag::stats
