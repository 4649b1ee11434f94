#pragma once

#include <span>

#include "dhdiag/stats/sample.hpp"

namespace dhdiag::stats {

struct MedcoupleResult {
  double value = 0.0;
  bool degenerate = false;  // fewer than 3 points
};

// Robust skewness: the median of
//   h(xi, xj) = ((xj - m) - (m - xi)) / (xj - xi)
// over all pairs xi <= m <= xj, m the sample median. Pairs tied at the median
// use the sign kernel. Runs in O(n log n) by selecting in the implicitly
// sorted kernel matrix instead of materializing its n^2/4 entries.
MedcoupleResult medcouple(std::span<const double> sample);
MedcoupleResult medcouple(const SortedSample& sample);

}  // namespace dhdiag::stats
