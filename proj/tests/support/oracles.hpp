#pragma once

// Brute-force restatements of the estimators, used only as test oracles.
// Nothing here shares code with the library implementations.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <vector>

namespace dhdiag::oracle {

inline double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 ? v[n / 2] : (v[n / 2 - 1] + v[n / 2]) / 2.0;
}

inline double mad(const std::vector<double>& v) {
  const double m = median(v);
  std::vector<double> d;
  for (double x : v) d.push_back(std::abs(x - m));
  return median(d);
}

// Every pair xi <= m <= xj. For the k points equal to m, indexed 1..k inside
// the tied block, h = -1 / 0 / +1 as i + j - 1 is below / at / above k.
inline double medcouple_naive(std::vector<double> v) {
  if (v.size() < 3) return 0.0;
  std::sort(v.begin(), v.end());
  const double m = median(v);
  std::size_t k = 0;
  for (double x : v) k += x == m ? 1 : 0;

  std::vector<double> h;
  std::size_t tie_i = 0;
  for (double xi : v) {
    if (xi > m) continue;
    if (xi == m) ++tie_i;
    std::size_t tie_j = 0;
    for (double xj : v) {
      if (xj < m) continue;
      if (xj == m) ++tie_j;
      if (xi < xj) {
        h.push_back(((xj - m) - (m - xi)) / (xj - xi));
      } else {
        const auto s = static_cast<long long>(tie_i + tie_j) - 1 - static_cast<long long>(k);
        h.push_back(s < 0 ? -1.0 : (s == 0 ? 0.0 : 1.0));
      }
    }
  }
  return median(h);
}

// Order statistic interpolation at the 1-based position 1 + (n - 1) p.
inline double quantile(std::vector<double> v, double p) {
  std::sort(v.begin(), v.end());
  const double pos = 1.0 + (static_cast<double>(v.size()) - 1.0) * p;
  const auto below = static_cast<std::size_t>(std::floor(pos));
  const double frac = pos - std::floor(pos);
  const double a = v[below - 1];
  const double b = below < v.size() ? v[below] : a;
  return a + frac * (b - a);
}

// Flags of |0.6745 (x - median) / MAD| > threshold, MeanAD fallback at MAD = 0.
inline std::vector<bool> anomaly_flags(const std::vector<double>& v, double threshold) {
  const double m = median(v);
  const double s = mad(v);
  double mean_ad = 0.0;
  for (double x : v) mean_ad += std::abs(x - m);
  mean_ad /= static_cast<double>(v.size());
  std::vector<bool> out;
  for (double x : v) {
    double score = 0.0;
    if (s != 0.0)
      score = 0.6745 * (x - m) / s;
    else if (mean_ad != 0.0)
      score = (x - m) / (1.253314 * mean_ad);
    out.push_back(std::abs(score) > threshold);
  }
  return out;
}

}  // namespace dhdiag::oracle
