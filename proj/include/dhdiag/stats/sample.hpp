#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace dhdiag::stats {

// Ascending copy of a sample. Lets several estimators share one sort.
class SortedSample {
 public:
  SortedSample() = default;
  explicit SortedSample(std::vector<double> values);
  explicit SortedSample(std::span<const double> values);

  std::span<const double> values() const noexcept { return values_; }
  std::size_t size() const noexcept { return values_.size(); }
  bool empty() const noexcept { return values_.empty(); }
  double min() const { return values_.front(); }
  double max() const { return values_.back(); }

 private:
  std::vector<double> values_;
};

}  // namespace dhdiag::stats
