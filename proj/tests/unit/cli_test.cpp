#include <catch2/catch_amalgamated.hpp>

#include <fstream>
#include <sstream>

#include "cli.hpp"
#include "dhdiag/diag/meter_stats.hpp"
#include "json_schema.hpp"
#include "temp_dir.hpp"

using namespace dhdiag;

namespace {

struct Run {
  int code = -1;
  std::string out;
  std::string err;
};

Run run(std::vector<std::string> args) {
  std::ostringstream out, err;
  Run r;
  r.code = cli::run(args, out, err);
  r.out = out.str();
  r.err = err.str();
  return r;
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

// Generates from `yaml` and ingests into <dir>/cache.
void prepare(const testing::TempDir& dir, std::string_view yaml) {
  const auto cfg = dir.write("gen.yaml", yaml);
  const auto out = (dir / "data").string();
  REQUIRE(run({"generate", "--config", cfg.string(), "--out", out}).code == 0);
  const auto r = run({"ingest", (dir / "data" / "readings.csv").string(), "--cache-dir", (dir / "cache").string()});
  INFO(r.err);
  REQUIRE(r.code == 0);
}

}  // namespace

TEST_CASE("report on a clean baseline exits 0") {
  testing::TempDir dir;
  prepare(dir, "seed: 4\nmeters: 10\nstart: 2023-01-01\nend: 2023-12-31\n");
  const auto r = run({"report", "--cache-dir", (dir / "cache").string()});
  INFO(r.out << r.err);
  CHECK(r.code == cli::kExitGreen);
  CHECK(r.out.find("overall: green") != std::string::npos);
}

TEST_CASE("report with 60% missing exits 2 and json validates") {
  testing::TempDir dir;
  prepare(dir, "seed: 2\nmeters: 10\nstart: 2023-01-01\nend: 2023-03-31\ndefects:\n  dead_meters: 6\n");
  const auto r = run({"report", "--cache-dir", (dir / "cache").string(), "--column", "energy", "--format", "json"});
  INFO(r.err);
  CHECK(r.code == cli::kExitRed);
  const auto j = nlohmann::json::parse(r.out);
  testing::SchemaValidator v(std::filesystem::path(DHDIAG_SOURCE_DIR) / "docs" / "schemas");
  CHECK(v.validate(j, "report.schema.json").empty());
  REQUIRE(j["kpis"].size() == 1);
  CHECK(v.validate(j["kpis"][0], "kpi.schema.json").empty());
  CHECK(j["kpis"][0]["nulls"]["null_rate"] == Catch::Approx(0.6));
  CHECK(j["kpis"][0]["nulls"]["status"] == "red");
}

TEST_CASE("report exits 1 on a yellow finding") {
  testing::TempDir dir;
  // 1 of 10 meters dead: null rate 0.10, inside the yellow band.
  prepare(dir, "seed: 3\nmeters: 10\nstart: 2023-01-01\nend: 2023-02-28\ndefects:\n  dead_meters: 1\n");
  const auto r = run({"report", "--cache-dir", (dir / "cache").string(), "--column", "energy"});
  INFO(r.out);
  CHECK(r.code == cli::kExitYellow);
}

TEST_CASE("export-meters writes the dead meters") {
  testing::TempDir dir;
  prepare(dir, "seed: 8\nmeters: 25\nstart: 2023-01-01\nend: 2023-04-30\ndefects:\n  dead_meters: 5\n");
  const auto out = dir / "dead.csv";
  const auto r = run({"export-meters", "--cache-dir", (dir / "cache").string(), "--filter", "energy.null_rate > 0.9",
                      "--out", out.string()});
  INFO(r.err);
  REQUIRE(r.code == 0);
  const auto ids = diag::parse_meter_list(slurp(out));
  CHECK(ids.size() == 5);
  const auto truth = nlohmann::json::parse(slurp(dir / "data" / "ground_truth.json"));
  CHECK(ids == truth["dead_meters"].get<std::vector<std::string>>());
}

TEST_CASE("second ingest reuses the cache") {
  testing::TempDir dir;
  prepare(dir, "seed: 1\nmeters: 3\nstart: 2023-01-01\nend: 2023-01-10\n");
  const auto r = run({"ingest", (dir / "data" / "readings.csv").string(), "--cache-dir", (dir / "cache").string(),
                      "--format", "json"});
  REQUIRE(r.code == 0);
  const auto j = nlohmann::json::parse(r.out);
  CHECK(j["cache_hit"] == true);
  CHECK(j["row_count"] == 720);
}

TEST_CASE("failures exit 3 with a message") {
  testing::TempDir dir;
  CHECK(run({}).code == cli::kExitFailure);
  CHECK(run({"report"}).code == cli::kExitFailure);
  const auto missing = run({"report", "--cache-dir", (dir / "none").string()});
  CHECK(missing.code == cli::kExitFailure);
  CHECK(missing.err.find("no usable cache") != std::string::npos);
  const auto bad_cfg = dir.write("bad.yaml", "meters: 0\n");
  const auto g = run({"generate", "--config", bad_cfg.string(), "--out", (dir / "x").string()});
  CHECK(g.code == cli::kExitFailure);
  CHECK(g.err.find("meters") != std::string::npos);
  prepare(dir, "seed: 1\nmeters: 3\nstart: 2023-01-01\nend: 2023-01-03\n");
  const auto f = run({"export-meters", "--cache-dir", (dir / "cache").string(), "--filter", "wat > 1", "--out",
                      (dir / "o.csv").string()});
  CHECK(f.code == cli::kExitFailure);
  CHECK(f.err.find("wat") != std::string::npos);
  CHECK(run({"report", "--cache-dir", (dir / "cache").string(), "--column", "bogus"}).code == cli::kExitFailure);
}
