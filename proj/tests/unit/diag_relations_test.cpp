#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <random>

#include "dhdiag/diag/relations.hpp"
#include "dhdiag/diag/timeseries.hpp"
#include "dhdiag/stats/correlation.hpp"
#include "dhdiag/store/errors.hpp"
#include "random_table.hpp"
#include "table_helpers.hpp"

using namespace dhdiag;
using namespace dhdiag::diag;
using namespace dhdiag::testing;

TEST_CASE("correlation matrix basics", "[correlation]") {
  const auto t = make_table({"a", "b", "c", "k"}, {{0, "m", {1, 2, 5, 7}},
                                                   {1, "m", {2, 4, 3, 7}},
                                                   {2, "m", {3, 6.5, kNull, 7}},
                                                   {3, "m", {4, kNull, 1, 7}},
                                                   {4, "m", {5, 10, 2, 7}}});
  for (const auto method : {CorrelationMethod::kPearson, CorrelationMethod::kSpearman}) {
    const auto m = correlation_matrix(t, method);
    REQUIRE(m.columns == std::vector<std::string>{"a", "b", "c", "k"});
    CHECK(m.cells[0][0] == 1.0);
    CHECK(m.cells[1][1] == 1.0);
    CHECK_FALSE(m.cells[3][3]);  // constant column
    CHECK_FALSE(m.cells[0][3]);
    CHECK(m.pair_counts[0][1] == 4);
    CHECK(m.pair_counts[1][2] == 3);
    for (std::size_t i = 0; i < 4; ++i)
      for (std::size_t j = 0; j < 4; ++j) CHECK(m.cells[i][j] == m.cells[j][i]);
  }
  // pairwise deletion: a vs b uses rows 0, 1, 2, 4
  const std::vector<double> a{1, 2, 3, 5};
  const std::vector<double> b{2, 4, 6.5, 10};
  CHECK(*correlation_matrix(t, CorrelationMethod::kPearson).cells[0][1] == *stats::pearson(a, b));
  CHECK(*correlation_matrix(t, CorrelationMethod::kSpearman).cells[0][1] == 1.0);
  CHECK(parse_correlation_method("spearman") == CorrelationMethod::kSpearman);
  CHECK_FALSE(parse_correlation_method("kendall"));
}

TEST_CASE("pearson on ranks equals spearman", "[correlation][property]") {
  std::mt19937_64 rng(31);
  for (int trial = 0; trial < 500; ++trial) {
    RandomTableSpec spec;
    spec.meters = 1 + rng() % 3;
    spec.hours = 3 + static_cast<int>(rng() % 40);
    spec.columns = 3;
    spec.null_prob = 0.0;
    spec.drop_prob = 0.1;
    const auto t = random_table(rng, spec);
    // rank-transformed copy (continuous values, so tie-free)
    std::vector<store::MeasurementColumn> ranked;
    for (const auto& c : t.columns())
      ranked.push_back({c.name, c.unit, stats::average_ranks(c.values), c.valid});
    const store::ReadingTable r(t.meter_ids(), {t.row_times().begin(), t.row_times().end()},
                                {t.row_meters().begin(), t.row_meters().end()}, ranked);
    const auto sp = correlation_matrix(t, CorrelationMethod::kSpearman);
    const auto pr = correlation_matrix(r, CorrelationMethod::kPearson);
    for (std::size_t i = 0; i < 3; ++i)
      for (std::size_t j = 0; j < 3; ++j) {
        REQUIRE(sp.cells[i][j].has_value() == pr.cells[i][j].has_value());
        if (sp.cells[i][j]) REQUIRE(std::abs(*sp.cells[i][j] - *pr.cells[i][j]) < 1e-9);
      }
  }
}

TEST_CASE("scatter sampling", "[scatter]") {
  SECTION("under the cap keeps every pair in row order") {
    std::vector<Row> rows;
    for (int i = 0; i < 60; ++i) rows.push_back({i, "m", {double(i), i % 7 == 0 ? kNull : 2.0 * i}});
    const auto t = make_table({"x", "y"}, rows);
    const auto s = scatter_sample(t, "x", "y");
    CHECK(s.complete_pairs == 51);
    CHECK_FALSE(s.sampled);
    REQUIRE(s.x.size() == 51);
    CHECK(std::is_sorted(s.x.begin(), s.x.end()));
    for (std::size_t i = 0; i < s.x.size(); ++i) CHECK(s.y[i] == 2.0 * s.x[i]);
  }
  SECTION("over the cap returns exactly max_points, deterministically") {
    std::vector<Row> rows;
    for (int i = 0; i < 5000; ++i) rows.push_back({i, "m", {double(i), -double(i)}});
    const auto t = make_table({"x", "y"}, rows);
    const auto a = scatter_sample(t, "x", "y", 1000, 7);
    const auto b = scatter_sample(t, "x", "y", 1000, 7);
    const auto c = scatter_sample(t, "x", "y", 1000, 8);
    CHECK(a.sampled);
    CHECK(a.x.size() == 1000);
    CHECK(a.x == b.x);
    CHECK(a.x != c.x);
    CHECK(std::adjacent_find(a.x.begin(), a.x.end(), std::greater_equal<>()) == a.x.end());
    for (std::size_t i = 0; i < a.x.size(); ++i) CHECK(a.y[i] == -a.x[i]);
  }
  SECTION("unknown column") {
    CHECK_THROWS_AS(scatter_sample(series_table({1}), "x", "q"), store::UnknownColumnError);
  }
}

TEST_CASE("scatter sampling is close to uniform", "[scatter][property]") {
  std::vector<Row> rows;
  for (int i = 0; i < 100; ++i) rows.push_back({i, "m", {double(i), 1.0}});
  const auto t = make_table({"x", "y"}, rows);
  std::vector<int> hits(100, 0);
  for (std::uint64_t seed = 0; seed < 2000; ++seed)
    for (const double x : scatter_sample(t, "x", "y", 10, seed).x) ++hits[static_cast<std::size_t>(x)];
  // expected 200 hits per row; 5 sigma is about 67
  for (const int h : hits) CHECK(std::abs(h - 200) < 70);
}

TEST_CASE("time series window in raw mode", "[timeseries]") {
  std::vector<Row> rows;
  for (int i = 0; i < 100; ++i) {
    if (i == 50) continue;  // absent row
    rows.push_back({i, "m", {i % 10 == 0 ? kNull : double(i)}});
  }
  const auto t = make_table({"x"}, rows);
  const auto w = timeseries_window(t, "m", "x");
  CHECK_FALSE(w.bucketed);
  REQUIRE(w.points.size() == 100);
  CHECK_FALSE(w.points[0].value);
  CHECK_FALSE(w.points[50].value);
  CHECK(w.points[51].value == 51.0);
  CHECK(w.points[99].timestamp == hour(99));

  const auto clipped = timeseries_window(t, "m", "x", hour(-10), hour(4));
  CHECK(clipped.points.size() == 5);
  CHECK(clipped.from == hour(0));
  CHECK(timeseries_window(t, "m", "x", hour(200), hour(300)).points.empty());
  CHECK_FALSE(timeseries_window(t, "m", "x", hour(200), hour(300)).from);
  CHECK_THROWS_AS(timeseries_window(t, "m", "x", hour(5), hour(4)), std::invalid_argument);
  CHECK_THROWS_AS(timeseries_window(t, "zz", "x"), store::UnknownMeterError);
}

TEST_CASE("time series window bucketing keeps extremes", "[timeseries]") {
  const std::size_t n = 1000000;
  store::TableBuilder b(std::vector<store::ColumnSpec>{{"x", ""}});
  std::mt19937_64 rng(3);
  std::normal_distribution<double> noise(0, 1);
  double global_max = -1e300;
  double global_min = 1e300;
  for (std::size_t i = 0; i < n; ++i) {
    double v = noise(rng);
    if (i == 123457) v = 1e4;  // a lone spike
    if (i % 1000 == 999) v = kNull;
    if (!std::isnan(v)) {
      global_max = std::max(global_max, v);
      global_min = std::min(global_min, v);
    }
    b.add_row(hour(static_cast<int>(i)), "m", std::span<const double>(&v, 1));
  }
  const auto t = b.build().table;
  const auto w = timeseries_window(t, "m", "x", {}, {}, 1000);
  CHECK(w.bucketed);
  CHECK(w.buckets.size() <= 1000);
  CHECK(w.bucket_hours == 1000);
  double bmax = -1e300;
  double bmin = 1e300;
  std::size_t hours = 0;
  std::size_t nulls = 0;
  for (const auto& bk : w.buckets) {
    bmax = std::max(bmax, *bk.max);
    bmin = std::min(bmin, *bk.min);
    hours += bk.hours;
    nulls += bk.null_count;
  }
  CHECK(bmax == global_max);
  CHECK(bmax == 1e4);
  CHECK(bmin == global_min);
  CHECK(hours == n);
  CHECK(nulls == 1000);
}

TEST_CASE("bucketed windows cover the span on random inputs", "[timeseries][property]") {
  std::mt19937_64 rng(8);
  for (int trial = 0; trial < 500; ++trial) {
    RandomTableSpec spec;
    spec.meters = 1;
    spec.hours = 2 + static_cast<int>(rng() % 300);
    spec.columns = 1;
    const auto t = random_table(rng, spec);
    const std::size_t max_points = 1 + rng() % 40;
    const auto w = timeseries_window(t, t.meter_ids()[0], "c0", {}, {}, max_points);
    const auto span = static_cast<std::size_t>((*w.to - *w.from).count()) + 1;
    if (!w.bucketed) {
      REQUIRE(w.points.size() == span);
      continue;
    }
    REQUIRE(w.buckets.size() <= max_points);
    std::size_t covered = 0;
    std::optional<double> top;
    for (const auto& bk : w.buckets) {
      covered += bk.hours;
      if (bk.max) top = top ? std::max(*top, *bk.max) : *bk.max;
    }
    REQUIRE(covered == span);
    std::optional<double> want;
    const auto& col = t.column("c0");
    for (std::size_t r = 0; r < t.row_count(); ++r)
      if (col.valid[r]) want = want ? std::max(*want, col.values[r]) : col.values[r];
    REQUIRE(top == want);
  }
}
