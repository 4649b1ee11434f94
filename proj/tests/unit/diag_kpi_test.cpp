#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "dhdiag/diag/kpi.hpp"
#include "dhdiag/store/activity.hpp"
#include "dhdiag/store/errors.hpp"
#include "random_table.hpp"
#include "table_helpers.hpp"

using namespace dhdiag;
using namespace dhdiag::diag;
using namespace dhdiag::testing;
using S = QualityStatus;

namespace {
DiagnosticsOptions no_rules() {
  DiagnosticsOptions o;
  o.rules.clear();
  return o;
}
}  // namespace

TEST_CASE("kpi on the outlier example", "[kpi]") {
  const auto t = series_table({1, 2, 3, 4, 100});
  const auto k = column_kpi(t, "x", {}, no_rules());
  REQUIRE(k.summary);
  CHECK(k.summary->median == 3.0);
  CHECK(k.anomaly.anomaly_count == 1);
  CHECK(k.anomaly.anomaly_rate == Catch::Approx(0.20).margin(1e-12));
  CHECK(k.anomaly_status == S::kRed);
  CHECK(k.nulls.null_rate == 0.0);
  CHECK(k.null_status == S::kGreen);
  CHECK(k.mean_gauge->value == 22.0);
  CHECK(k.mean_gauge->status == S::kRed);  // 21/99 of the scale
  CHECK(k.median_gauge->status == S::kRed);
  CHECK(k.overall_status() == S::kRed);
  CHECK(std::find(k.suggested_actions.begin(), k.suggested_actions.end(),
                  "Investigate anomalies, impute, or remove extreme values") != k.suggested_actions.end());
}

TEST_CASE("sixty percent missing is red", "[kpi]") {
  // 10 expected hours: 4 values, 3 null cells, 3 absent rows
  std::vector<Row> rows;
  for (int h = 0; h < 10; ++h) {
    if (h == 2 || h == 5 || h == 7) continue;
    rows.push_back({h, "m", {(h == 1 || h == 3 || h == 8) ? kNull : 1.0 + h}});
  }
  const auto k = column_kpi(make_table({"x"}, rows), "x", {}, no_rules());
  CHECK(k.nulls.expected_count == 10);
  CHECK(k.nulls.null_count == 3);
  CHECK(k.nulls.structurally_missing_count == 3);
  CHECK(k.nulls.non_null_count == 4);
  CHECK(k.nulls.null_rate == 0.6);
  CHECK(k.null_status == S::kRed);
  CHECK(std::find(k.suggested_actions.begin(), k.suggested_actions.end(),
                  "Identify periods with high loss; flag or impute") != k.suggested_actions.end());
}

TEST_CASE("constant column is green", "[kpi]") {
  const auto k = column_kpi(series_table(std::vector<double>(20, 4.0)), "x", {}, no_rules());
  CHECK(k.skewness->value == 0.0);
  CHECK(k.skewness_status == S::kGreen);
  CHECK(k.anomaly.anomaly_rate == 0.0);
  CHECK(k.anomaly_status == S::kGreen);
  CHECK(k.anomaly.degenerate_scale);
  CHECK(k.mean_gauge->status == S::kNone);
  CHECK(k.mean_gauge->position == 0.5);
  CHECK(k.overall_status() == S::kGreen);
  CHECK(k.suggested_actions.empty());
}

TEST_CASE("all-null column has no summary", "[kpi]") {
  const auto k = column_kpi(series_table({kNull, kNull, kNull}), "x", {}, no_rules());
  CHECK_FALSE(k.summary);
  CHECK_FALSE(k.skewness);
  CHECK_FALSE(k.mean_gauge);
  CHECK(k.nulls.null_rate == 1.0);
  CHECK(k.null_status == S::kRed);
  CHECK(k.anomaly_status == S::kNone);
  CHECK(k.skewness_status == S::kNone);
}

TEST_CASE("status boundaries through synthetic rates", "[kpi]") {
  SECTION("anomaly rate exactly 0.05 and 0.10") {
    // 19 or 9 spread values plus one far outlier
    for (const auto& [n, rate] : {std::pair{20, 0.05}, std::pair{10, 0.10}}) {
      std::vector<double> v;
      for (int i = 0; i < n - 1; ++i) v.push_back(i);
      v.push_back(1e6);
      const auto k = column_kpi(series_table(v), "x", {}, no_rules());
      CHECK(k.anomaly.anomaly_rate == rate);
      CHECK(k.anomaly_status == S::kYellow);
    }
  }
  SECTION("null rate exactly 0.05 and 0.50") {
    for (const auto& [n, nulls] : {std::pair{20, 1}, std::pair{10, 5}}) {
      std::vector<double> v(static_cast<std::size_t>(n), 1.0);
      for (int i = 0; i < nulls; ++i) v[static_cast<std::size_t>(i) * 2 + 1] = kNull;
      const auto k = column_kpi(series_table(v), "x", {}, no_rules());
      CHECK(k.null_status == S::kYellow);
    }
  }
}

TEST_CASE("scoped kpi and rule counts", "[kpi]") {
  const auto t = make_table({"energy"}, {{0, "a", {1.0}}, {1, "a", {-0.2}}, {2, "a", {0.0}}, {0, "b", {5.0}},
                                         {3, "b", {kNull}}});
  DiagnosticsOptions o;  // energy >= 0
  const auto a = column_kpi(t, "energy", "a", o);
  CHECK(a.meter_id == "a");
  CHECK(a.summary->count == 3);
  CHECK(a.rule_violation_count == 1);
  CHECK(std::find(a.suggested_actions.begin(), a.suggested_actions.end(),
                  "Clip or correct invalid values (e.g., negative energy)") != a.suggested_actions.end());
  const auto b = column_kpi(t, "energy", "b", o);
  CHECK(b.nulls.expected_count == 4);
  CHECK(b.nulls.null_count == 1);
  CHECK(b.nulls.structurally_missing_count == 2);
  CHECK_THROWS_AS(column_kpi(t, "energy", "zzz", o), store::UnknownMeterError);
  CHECK_THROWS_AS(column_kpi(t, "nope", {}, o), store::UnknownColumnError);

  auto to_end = o;
  to_end.window_mode = store::WindowMode::kFirstToDatasetEnd;
  CHECK(column_kpi(t, "energy", "a", to_end).nulls.expected_count == 4);
}

TEST_CASE("accounting identity on random tables", "[kpi][property]") {
  std::mt19937_64 rng(2024);
  for (int trial = 0; trial < 500; ++trial) {
    RandomTableSpec spec;
    spec.meters = 1 + rng() % 5;
    spec.hours = 1 + static_cast<int>(rng() % 60);
    spec.null_prob = static_cast<double>(rng() % 100) / 100.0;
    spec.drop_prob = static_cast<double>(rng() % 90) / 100.0;
    const auto t = random_table(rng, spec);
    for (const auto mode : {store::WindowMode::kFirstToLast, store::WindowMode::kFirstToDatasetEnd}) {
      std::size_t expected_all = 0;
      for (const auto& a : store::meter_activity(t, mode)) expected_all += a.expected_count;
      for (const auto& col : t.column_names()) {
        const auto n = null_accounting(t, col, {}, mode);
        REQUIRE(n.null_count + n.structurally_missing_count + n.non_null_count == n.expected_count);
        REQUIRE(n.expected_count == expected_all);
        REQUIRE(n.null_rate >= 0.0);
        REQUIRE(n.null_rate <= 1.0);
        std::size_t per_meter_sum = 0;
        for (const auto& m : t.meter_ids()) {
          const auto pm = null_accounting(t, col, m, mode);
          REQUIRE(pm.null_count + pm.structurally_missing_count + pm.non_null_count == pm.expected_count);
          per_meter_sum += pm.null_count + pm.structurally_missing_count;
        }
        REQUIRE(per_meter_sum == n.null_count + n.structurally_missing_count);
      }
    }
  }
}

TEST_CASE("column_kpis covers every column", "[kpi]") {
  std::mt19937_64 rng(5);
  RandomTableSpec spec;
  spec.columns = 5;
  const auto t = random_table(rng, spec);
  const auto all = column_kpis(t);
  REQUIRE(all.size() == 5);
  for (std::size_t i = 0; i < all.size(); ++i) {
    CHECK(all[i].column == t.columns()[i].name);
    CHECK(all[i].summary->count == column_kpi(t, all[i].column).summary->count);
  }
}
