#include "dhdiag/stats/sample.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cstdint>

namespace dhdiag::stats {

namespace {

constexpr std::size_t kRadixThreshold = 4096;
constexpr int kDigitBits = 11;
constexpr std::size_t kBuckets = std::size_t{1} << kDigitBits;
constexpr int kPasses = (64 + kDigitBits - 1) / kDigitBits;

// Order-preserving map of finite doubles onto unsigned integers.
std::uint64_t to_key(double x) {
  const auto bits = std::bit_cast<std::uint64_t>(x);
  return (bits >> 63) != 0 ? ~bits : bits | (std::uint64_t{1} << 63);
}

double from_key(std::uint64_t k) {
  return std::bit_cast<double>((k >> 63) != 0 ? k & ~(std::uint64_t{1} << 63) : ~k);
}

void radix_sort(std::vector<double>& values) {
  const std::size_t n = values.size();
  std::vector<std::uint64_t> keys(n), tmp(n);
  std::vector<std::array<std::size_t, kBuckets>> counts(kPasses);
  for (auto& c : counts) c.fill(0);
  for (std::size_t i = 0; i < n; ++i) {
    const auto k = to_key(values[i]);
    keys[i] = k;
    for (int p = 0; p < kPasses; ++p) ++counts[p][(k >> (p * kDigitBits)) & (kBuckets - 1)];
  }
  for (int p = 0; p < kPasses; ++p) {
    auto& c = counts[p];
    if (std::find(c.begin(), c.end(), n) != c.end()) continue;  // every key shares this digit
    std::size_t sum = 0;
    for (auto& v : c) {
      const std::size_t count = v;
      v = sum;
      sum += count;
    }
    const int shift = p * kDigitBits;
    for (const auto k : keys) tmp[c[(k >> shift) & (kBuckets - 1)]++] = k;
    keys.swap(tmp);
  }
  for (std::size_t i = 0; i < n; ++i) values[i] = from_key(keys[i]);
}

}  // namespace

SortedSample::SortedSample(std::vector<double> values) : values_(std::move(values)) {
  if (values_.size() < kRadixThreshold)
    std::sort(values_.begin(), values_.end());
  else
    radix_sort(values_);
}

SortedSample::SortedSample(std::span<const double> values)
    : SortedSample(std::vector<double>(values.begin(), values.end())) {}

}  // namespace dhdiag::stats
