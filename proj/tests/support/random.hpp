#pragma once

#include <cstdint>
#include <random>
#include <vector>

namespace dhdiag::testing {

inline std::vector<double> random_sample(std::mt19937_64& rng, std::size_t n, double lo = -100.0,
                                         double hi = 100.0) {
  std::uniform_real_distribution<double> dist(lo, hi);
  std::vector<double> v(n);
  for (auto& x : v) x = dist(rng);
  return v;
}

// Skewed sample: exponential body plus a few large values.
inline std::vector<double> skewed_sample(std::mt19937_64& rng, std::size_t n) {
  std::exponential_distribution<double> body(0.5);
  std::vector<double> v(n);
  for (auto& x : v) x = body(rng);
  return v;
}

// At least `tie_fraction` of the points equal `center`, which is also the median.
inline std::vector<double> tied_sample(std::mt19937_64& rng, std::size_t n, double tie_fraction,
                                       double center = 10.0) {
  const auto ties = static_cast<std::size_t>(static_cast<double>(n) * tie_fraction + 0.999999);
  const std::size_t rest = n - ties;
  const std::size_t below = rest / 2;
  std::exponential_distribution<double> left(0.3);
  std::exponential_distribution<double> right(0.1);
  std::vector<double> v;
  v.reserve(n);
  for (std::size_t i = 0; i < ties; ++i) v.push_back(center);
  for (std::size_t i = 0; i < below; ++i) v.push_back(center - 0.01 - left(rng));
  for (std::size_t i = below; i < rest; ++i) v.push_back(center + 0.01 + right(rng));
  std::shuffle(v.begin(), v.end(), rng);
  return v;
}

}  // namespace dhdiag::testing
