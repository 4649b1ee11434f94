#include "dhdiag/stats/medcouple.hpp"

#include <algorithm>
#include <cstddef>
#include <functional>
#include <cmath>
#include <random>
#include <span>
#include <utility>
#include <vector>

#include "dhdiag/stats/robust.hpp"

namespace dhdiag::stats {

namespace {

using Index = std::ptrdiff_t;

// h(i, j) over deviations from the median. Both axes are sorted descending,
// so every row and every column of the matrix is non-increasing.
class KernelMatrix {
 public:
  KernelMatrix(std::vector<double> upper, std::vector<double> lower)
      : upper_(std::move(upper)), lower_(std::move(lower)) {}

  Index rows() const noexcept { return static_cast<Index>(upper_.size()); }
  Index cols() const noexcept { return static_cast<Index>(lower_.size()); }

  double operator()(Index i, Index j) const noexcept {
    const double a = upper_[static_cast<std::size_t>(i)];
    const double b = lower_[static_cast<std::size_t>(j)];
    if (a == b) {
      // Both points sit on the median.
      const Index s = rows() - 1 - i - j;
      return s > 0 ? 1.0 : (s < 0 ? -1.0 : 0.0);
    }
    return (a + b) / (a - b);
  }

 private:
  std::vector<double> upper_;  // x - m for x >= m
  std::vector<double> lower_;  // x - m for x <= m
};

struct Weighted {
  double value;
  std::size_t weight;
};

// Lower weighted median in expected linear time.
double weighted_median(std::vector<Weighted>& items) {
  std::size_t total = 0;
  for (const auto& w : items) total += w.weight;
  const std::size_t target = (total + 1) / 2;

  auto by_value = [](const Weighted& a, const Weighted& b) { return a.value < b.value; };
  std::size_t lo = 0;
  std::size_t hi = items.size();
  std::size_t before = 0;
  while (hi - lo > 1) {
    const std::size_t mid = lo + (hi - lo) / 2;
    std::nth_element(items.begin() + static_cast<Index>(lo), items.begin() + static_cast<Index>(mid),
                     items.begin() + static_cast<Index>(hi), by_value);
    std::size_t left = 0;
    for (std::size_t k = lo; k < mid; ++k) left += items[k].weight;
    if (before + left >= target) {
      hi = mid;
    } else if (before + left + items[mid].weight >= target) {
      return items[mid].value;
    } else {
      before += left + items[mid].weight;
      lo = mid + 1;
    }
  }
  return items[lo].value;
}

// last[i] = last column with h(i, j) > pivot (-1 if none). Returns the count.
// Columns before lo[i] are known to exceed the pivot and columns after hi[i]
// are known not to, so the walk only evaluates the band in between.
std::size_t count_greater(const KernelMatrix& h, double pivot, std::span<const Index> lo,
                          std::span<const Index> hi, std::vector<Index>& last) {
  const Index p = h.rows();
  const Index q = h.cols();
  std::size_t total = 0;
  Index j = 0;
  for (Index i = p - 1; i >= 0; --i) {
    const auto r = static_cast<std::size_t>(i);
    j = std::clamp(j, lo[r], std::min(hi[r] + 1, q));
    while (j <= hi[r] && h(i, j) > pivot) ++j;
    last[r] = j - 1;
    total += static_cast<std::size_t>(j);
  }
  return total;
}

// count[i] = number of columns with h(i, j) >= pivot. Returns the sum.
std::size_t count_at_least(const KernelMatrix& h, double pivot, std::span<const Index> lo,
                           std::span<const Index> hi, std::vector<Index>& count) {
  const Index p = h.rows();
  std::size_t total = 0;
  Index j = h.cols() - 1;
  for (Index i = 0; i < p; ++i) {
    const auto r = static_cast<std::size_t>(i);
    j = std::clamp(j, lo[r] - 1, hi[r]);
    while (j >= lo[r] && h(i, j) < pivot) --j;
    count[r] = j + 1;
    total += static_cast<std::size_t>(j + 1);
  }
  return total;
}

// Candidate band of the kernel matrix: columns [left[i], right[i]] of row i.
// Entries before the band rank above every candidate, entries after it below.
struct Band {
  std::vector<Index> left;
  std::vector<Index> right;
  std::size_t left_total = 0;   // entries ranked before the candidates
  std::size_t right_total = 0;  // entries through the candidates

  std::size_t size() const noexcept { return right_total - left_total; }
};

// Which side of the band moved, or whether the pivot is the answer.
enum class Narrowed { kRight, kLeft, kFound };

// Narrows the band around `rank` using a pivot drawn from the candidates.
Narrowed narrow(const KernelMatrix& h, Band& band, double pivot, std::size_t rank,
                std::vector<Index>& scratch) {
  const std::size_t n_greater = count_greater(h, pivot, band.left, band.right, scratch);
  if (rank < n_greater) {
    band.right.swap(scratch);
    band.right_total = n_greater;
    return Narrowed::kRight;
  }
  const std::size_t n_at_least = count_at_least(h, pivot, band.left, band.right, scratch);
  if (rank >= n_at_least) {
    band.left.swap(scratch);
    band.left_total = n_at_least;
    return Narrowed::kLeft;
  }
  return Narrowed::kFound;
}

// Weighted median of the row-wise band midpoints; discards at least a quarter
// of the candidates per step.
double midpoint_pivot(const KernelMatrix& h, const Band& band, std::vector<Weighted>& row_medians) {
  row_medians.clear();
  for (Index i = 0; i < h.rows(); ++i) {
    const auto r = static_cast<std::size_t>(i);
    if (band.left[r] > band.right[r]) continue;
    row_medians.push_back({h(i, (band.left[r] + band.right[r]) / 2),
                           static_cast<std::size_t>(band.right[r] - band.left[r] + 1)});
  }
  return weighted_median(row_medians);
}

// Two pivots bracketing the target rank, read off a uniform sample of the
// candidates. The bracket is a few standard deviations of the sample rank wide.
std::pair<double, double> sampled_pivots(const KernelMatrix& h, const Band& band, std::size_t rank,
                                         std::mt19937_64& rng) {
  constexpr std::size_t kSampleSize = 65536;
  std::vector<std::size_t> offsets(static_cast<std::size_t>(h.rows()));
  std::size_t acc = 0;
  for (std::size_t r = 0; r < offsets.size(); ++r) {
    offsets[r] = acc;
    if (band.left[r] <= band.right[r]) acc += static_cast<std::size_t>(band.right[r] - band.left[r] + 1);
  }

  std::vector<double> sample(kSampleSize);
  for (auto& v : sample) {
    const std::size_t pick = rng() % acc;
    const auto row = static_cast<std::size_t>(
        std::upper_bound(offsets.begin(), offsets.end(), pick) - offsets.begin() - 1);
    v = h(static_cast<Index>(row), band.left[row] + static_cast<Index>(pick - offsets[row]));
  }
  std::sort(sample.begin(), sample.end(), std::greater<>());

  const double fraction = static_cast<double>(rank - band.left_total) / static_cast<double>(acc);
  const double center = fraction * static_cast<double>(kSampleSize);
  const double margin = 4.0 * std::sqrt(static_cast<double>(kSampleSize) * 0.25) + 1.0;
  const auto clamp_index = [](double x) {
    return static_cast<std::size_t>(std::clamp(x, 0.0, static_cast<double>(kSampleSize - 1)));
  };
  return {sample[clamp_index(center - margin)], sample[clamp_index(center + margin)]};
}

// Element of the kernel matrix at 0-based rank `rank` in descending order.
double select_descending(const KernelMatrix& h, std::size_t rank) {
  const auto rows = static_cast<std::size_t>(h.rows());
  Band band{std::vector<Index>(rows, 0), std::vector<Index>(rows, h.cols() - 1), 0,
            rows * static_cast<std::size_t>(h.cols())};
  std::vector<Index> scratch(rows);
  std::vector<Weighted> row_medians;
  // Pivot choice only affects speed; the selected value is exact.
  std::mt19937_64 rng(0x6d656463ULL);

  const std::size_t materialize_at = std::max<std::size_t>(2 * rows, 4096);
  while (band.size() > materialize_at) {
    const std::size_t before = band.size();
    const auto [high, low] = sampled_pivots(h, band, rank, rng);
    const Narrowed first = narrow(h, band, low, rank, scratch);
    if (first == Narrowed::kFound) return low;
    // After the right edge moves to `low`, `high` is still inside the band.
    if (first == Narrowed::kRight && high > low) {
      if (narrow(h, band, high, rank, scratch) == Narrowed::kFound) return high;
    }
    if (band.size() * 2 > before) {
      const double pivot = midpoint_pivot(h, band, row_medians);
      if (narrow(h, band, pivot, rank, scratch) == Narrowed::kFound) return pivot;
    }
  }

  std::vector<double> remaining;
  remaining.reserve(band.size());
  for (Index i = 0; i < h.rows(); ++i) {
    const auto r = static_cast<std::size_t>(i);
    for (Index j = band.left[r]; j <= band.right[r]; ++j) remaining.push_back(h(i, j));
  }
  const auto nth = remaining.begin() + static_cast<Index>(rank - band.left_total);
  std::nth_element(remaining.begin(), nth, remaining.end(), std::greater<>());
  return *nth;
}

MedcoupleResult medcouple_of_sorted(std::span<const double> sorted) {
  if (sorted.size() < 3) return {0.0, true};

  const double m = median_sorted(sorted);
  const auto first_upper = std::lower_bound(sorted.begin(), sorted.end(), m);
  const auto end_lower = std::upper_bound(sorted.begin(), sorted.end(), m);

  std::vector<double> upper;
  upper.reserve(static_cast<std::size_t>(sorted.end() - first_upper));
  for (auto it = sorted.end(); it != first_upper;) upper.push_back(*--it - m);
  std::vector<double> lower;
  lower.reserve(static_cast<std::size_t>(end_lower - sorted.begin()));
  for (auto it = end_lower; it != sorted.begin();) lower.push_back(*--it - m);

  const KernelMatrix h(std::move(upper), std::move(lower));
  const std::size_t total = static_cast<std::size_t>(h.rows()) * static_cast<std::size_t>(h.cols());

  // Descending rank total/2 is the lower middle in ascending order.
  double value = select_descending(h, total / 2);
  if (total % 2 == 0) {
    const auto rows = static_cast<std::size_t>(h.rows());
    std::vector<Index> last(rows);
    const std::vector<Index> lo(rows, 0);
    const std::vector<Index> hi(rows, h.cols() - 1);
    if (count_greater(h, value, lo, hi, last) == total / 2) {
      // The upper middle is the smallest entry strictly above the lower one.
      double upper_middle = 1.0;
      for (Index i = 0; i < h.rows(); ++i) {
        const Index j = last[static_cast<std::size_t>(i)];
        if (j >= 0) upper_middle = std::min(upper_middle, h(i, j));
      }
      value = 0.5 * (value + upper_middle);
    }
  }
  return {std::clamp(value, -1.0, 1.0), false};
}

}  // namespace

MedcoupleResult medcouple(std::span<const double> sample) {
  if (sample.size() < 3) return {0.0, true};
  return medcouple_of_sorted(SortedSample(sample).values());
}

MedcoupleResult medcouple(const SortedSample& sample) {
  return medcouple_of_sorted(sample.values());
}

}  // namespace dhdiag::stats
