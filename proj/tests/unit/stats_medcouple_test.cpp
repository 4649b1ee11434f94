#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <random>
#include <vector>

#include "dhdiag/stats/medcouple.hpp"
#include "oracles.hpp"
#include "random.hpp"

using namespace dhdiag::stats;
using Catch::Matchers::WithinAbs;

TEST_CASE("medcouple hand-enumerated example", "[medcouple]") {
  // m = 2, kernel values {-1/3, 0, 0.6, 7/9}
  const auto mc = medcouple(std::vector<double>{0, 1, 3, 10});
  CHECK_FALSE(mc.degenerate);
  CHECK_THAT(mc.value, WithinAbs(0.3, 1e-12));
  CHECK_THAT(medcouple(std::vector<double>{0, -1, -3, -10}).value, WithinAbs(-0.3, 1e-12));
  CHECK_THAT(dhdiag::oracle::medcouple_naive({0, 1, 3, 10}), WithinAbs(0.3, 1e-12));
}

TEST_CASE("medcouple symmetric and degenerate inputs", "[medcouple]") {
  CHECK(medcouple(std::vector<double>{1, 2, 3}).value == 0.0);
  CHECK(medcouple(std::vector<double>{-5, -1, 0, 1, 5}).value == 0.0);
  CHECK(medcouple(std::vector<double>{7, 7, 7, 7}).value == 0.0);

  const auto two = medcouple(std::vector<double>{1, 2});
  CHECK(two.degenerate);
  CHECK(two.value == 0.0);
  CHECK(medcouple(std::vector<double>{}).degenerate);
}

TEST_CASE("medcouple tie kernel at the median", "[medcouple]") {
  // m = 1 with three tied points: tie block contributes {-1 x3, 0 x3, +1 x3}
  const std::vector<double> v{0, 1, 1, 1, 5};
  CHECK_THAT(medcouple(v).value, WithinAbs(dhdiag::oracle::medcouple_naive(v), 1e-12));
}

TEST_CASE("medcouple matches the naive oracle", "[medcouple][property]") {
  std::mt19937_64 rng(2024);
  std::uniform_int_distribution<std::size_t> size(3, 120);
  for (int trial = 0; trial < 300; ++trial) {
    std::vector<double> v;
    switch (trial % 3) {
      case 0: v = dhdiag::testing::random_sample(rng, size(rng)); break;
      case 1: v = dhdiag::testing::skewed_sample(rng, size(rng)); break;
      default: v = dhdiag::testing::tied_sample(rng, size(rng), 0.35); break;
    }
    INFO("trial " << trial << " n=" << v.size());
    CHECK_THAT(medcouple(v).value, WithinAbs(dhdiag::oracle::medcouple_naive(v), 1e-9));
  }
}

TEST_CASE("medcouple quantized samples with many ties", "[medcouple][property]") {
  std::mt19937_64 rng(99);
  std::uniform_int_distribution<int> level(0, 4);
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<double> v(3 + static_cast<std::size_t>(trial));
    for (auto& x : v) x = level(rng) * 0.5;
    CHECK_THAT(medcouple(v).value, WithinAbs(dhdiag::oracle::medcouple_naive(v), 1e-9));
  }
}

TEST_CASE("medcouple affine invariance and antisymmetry", "[medcouple][property]") {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 100; ++trial) {
    const auto v = dhdiag::testing::skewed_sample(rng, 5 + static_cast<std::size_t>(trial));
    const double base = medcouple(v).value;
    std::vector<double> affine, negated;
    for (double x : v) {
      affine.push_back(3.0 * x + 17.0);
      negated.push_back(-x);
    }
    CHECK_THAT(medcouple(affine).value, WithinAbs(base, 1e-9));
    CHECK_THAT(medcouple(negated).value, WithinAbs(-base, 1e-9));
    CHECK(base >= -1.0);
    CHECK(base <= 1.0);
  }
}

TEST_CASE("medcouple banded selection on larger samples", "[medcouple][property]") {
  std::mt19937_64 rng(77);
  for (std::size_t n : {300u, 401u, 500u, 2999u}) {
    for (int kind = 0; kind < 3; ++kind) {
      std::vector<double> v;
      if (kind == 0) v = dhdiag::testing::skewed_sample(rng, n);
      if (kind == 1) v = dhdiag::testing::tied_sample(rng, n, 0.4);
      if (kind == 2) v = dhdiag::testing::random_sample(rng, n);
      INFO("n=" << n << " kind=" << kind);
      CHECK_THAT(medcouple(v).value, WithinAbs(dhdiag::oracle::medcouple_naive(v), 1e-9));
    }
  }
}
