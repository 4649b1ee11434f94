#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>
#include <vector>

#include "dhdiag/stats/correlation.hpp"
#include "random.hpp"

using namespace dhdiag::stats;
using Catch::Matchers::WithinAbs;

TEST_CASE("pearson examples", "[correlation]") {
  const std::vector<double> x{1, 2, 3};
  CHECK_THAT(*pearson(x, std::vector<double>{3, 5, 7}), WithinAbs(1.0, 1e-12));
  CHECK_THAT(*pearson(x, std::vector<double>{-1, -2, -3}), WithinAbs(-1.0, 1e-12));
  // 3 / sqrt(28/3)
  CHECK_THAT(*pearson(x, std::vector<double>{1, 2, 4}), WithinAbs(0.98198, 1e-5));
}

TEST_CASE("pearson error paths", "[correlation]") {
  CHECK_THROWS_AS(pearson(std::vector<double>{1, 2}, std::vector<double>{1}), std::invalid_argument);
  CHECK_FALSE(pearson(std::vector<double>{1, 1, 1}, std::vector<double>{1, 2, 3}).has_value());
  CHECK_FALSE(pearson(std::vector<double>{1}, std::vector<double>{2}).has_value());
}

TEST_CASE("spearman examples", "[correlation]") {
  const std::vector<double> x{1, 2, 3, 4};
  CHECK_THAT(*spearman(x, std::vector<double>{1, 8, 27, 64}), WithinAbs(1.0, 1e-12));
  const std::vector<double> a{1, 2, 2, 3};
  const std::vector<double> b{1, 3, 2, 4};
  CHECK_THAT(*spearman(a, b), WithinAbs(0.94868, 1e-5));
  CHECK(*spearman(a, b) == *spearman(b, a));
  CHECK(average_ranks(a) == std::vector<double>{1, 2.5, 2.5, 4});
}

TEST_CASE("spearman is invariant under increasing transforms", "[correlation][property]") {
  std::mt19937_64 rng(17);
  for (int trial = 0; trial < 100; ++trial) {
    const auto x = dhdiag::testing::random_sample(rng, 20, 0.1, 10.0);
    const auto y = dhdiag::testing::random_sample(rng, 20, 0.1, 10.0);
    std::vector<double> tx, ty;
    for (double v : x) tx.push_back(std::exp(v));
    for (double v : y) ty.push_back(std::log(v) * 4.0 + 1.0);
    CHECK_THAT(*spearman(tx, ty), WithinAbs(*spearman(x, y), 1e-12));
  }
}

TEST_CASE("pearson is exactly one on positive affine relations", "[correlation][property]") {
  std::mt19937_64 rng(23);
  std::uniform_real_distribution<double> slope(0.01, 100.0);
  for (int trial = 0; trial < 100; ++trial) {
    const auto x = dhdiag::testing::random_sample(rng, 50);
    const double a = slope(rng);
    std::vector<double> y;
    for (double v : x) y.push_back(a * v - 3.0);
    CHECK_THAT(*pearson(x, y), WithinAbs(1.0, 1e-12));
  }
}
