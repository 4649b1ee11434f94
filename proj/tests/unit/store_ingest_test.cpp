#include <catch2/catch_amalgamated.hpp>

#include "dhdiag/store/csv_ingest.hpp"
#include "dhdiag/store/errors.hpp"
#include "temp_dir.hpp"

using namespace dhdiag::store;
using dhdiag::testing::TempDir;

namespace {

const char* kHeader = "timestamp,meter_id,energy,forward_temp,return_temp,flow,energy_computed\n";

IngestResult load_one(const std::filesystem::path& p, const IngestSchema& schema = IngestSchema::defaults()) {
  const std::vector<std::filesystem::path> paths{p};
  return load_csv(paths, schema);
}

HourStamp utc(std::string_view s) { return *parse_timestamp(s, TimeZoneRule::utc()); }

}  // namespace

TEST_CASE("three rows with one empty energy field", "[ingest]") {
  TempDir dir;
  const auto p = dir.write("a.csv", std::string(kHeader) +
                                        "2020-01-01T00:00:00Z,m1,1.5,70,40,100,1.5\n"
                                        "2020-01-01T01:00:00Z,m1,,70,40,100,1.5\n"
                                        "2020-01-01T02:00:00Z,m1,2.5,70,40,100,2.5\n");
  const auto r = load_one(p);
  CHECK(r.table.row_count() == 3);
  CHECK(r.table.column("energy").null_count() == 1);
  CHECK(r.table.column("flow").null_count() == 0);
  CHECK(r.report.rows_read == 3);
  CHECK(r.report.rows_accepted == 3);
  CHECK(r.report.rows_rejected == 0);
}

TEST_CASE("duplicate row in a file", "[ingest]") {
  TempDir dir;
  const auto p = dir.write("a.csv", std::string(kHeader) +
                                        "2020-01-01T00:00:00Z,m1,1,70,40,100,1\n"
                                        "2020-01-01T00:00:00Z,m1,2,70,40,100,2\n");
  const auto r = load_one(p);
  CHECK(r.report.duplicate_rows == 1);
  CHECK(r.table.row_count() == 1);
  CHECK(r.table.column("energy").values[0] == 2.0);
  CHECK(r.report.rows_read == r.report.rows_accepted + r.report.rows_rejected + r.report.duplicate_rows);
}

TEST_CASE("header-only file", "[ingest]") {
  TempDir dir;
  const auto r = load_one(dir.write("a.csv", kHeader));
  CHECK(r.table.empty());
  CHECK(r.report.rows_read == 0);
  CHECK(r.report.errors.empty());
}

TEST_CASE("malformed rows are rejected and counted", "[ingest]") {
  TempDir dir;
  const auto p = dir.write("a.csv", std::string(kHeader) +
                                        "2020-01-01T00:00:00Z,m1,1,70,40,100,1\n"
                                        "2020-01-01T01:00:00Z,m1,abc,70,40,100,1\n"
                                        "not-a-time,m1,1,70,40,100,1\n"
                                        "2020-01-01T02:00:00Z,,1,70,40,100,1\n"
                                        "2020-01-01T03:00:00Z,m1,1,70\n"
                                        "\n"
                                        "2020-01-01T04:00:00Z,m1,1,70,40,100,1\n");
  const auto r = load_one(p);
  CHECK(r.report.rows_read == 6);
  CHECK(r.report.rows_rejected == 4);
  CHECK(r.report.rows_accepted == 2);
  REQUIRE(r.report.errors.size() == 4);
  CHECK(r.report.errors[0].line == 3);
  CHECK(r.report.errors[1].line == 4);
  CHECK(r.report.errors[3].line == 6);
  CHECK(r.report.errors[0].file == p.string());
}

TEST_CASE("error samples are capped per file", "[ingest]") {
  TempDir dir;
  std::string body = kHeader;
  for (int i = 0; i < 250; ++i) body += "garbage,row\n";
  const auto a = dir.write("a.csv", body);
  const auto b = dir.write("b.csv", body);
  const std::vector<std::filesystem::path> paths{a, b};
  const auto r = load_csv(paths, IngestSchema::defaults());
  CHECK(r.report.rows_rejected == 500);
  CHECK(r.report.errors.size() == 2 * kMaxErrorSamplesPerFile);
}

TEST_CASE("non-finite numbers and sentinels become null", "[ingest]") {
  TempDir dir;
  auto schema = IngestSchema::defaults();
  schema.null_sentinels = {"NULL", "-"};
  const auto p = dir.write("a.csv", std::string(kHeader) +
                                        "2020-01-01T00:00:00Z,m1,nan,inf,-inf,NULL,-\n"
                                        "2020-01-01T01:00:00Z,m1,1e999,+2.5,-3,0,1\n");
  const auto r = load_one(p, schema);
  CHECK(r.report.nonfinite_cells == 4);
  CHECK(r.report.rows_rejected == 0);
  const auto& t = r.table;
  for (const auto& c : t.columns()) CHECK(c.is_null(0));
  CHECK(t.column("energy").is_null(1));
  CHECK(t.column("forward_temp").values[1] == 2.5);
  CHECK(t.column("return_temp").values[1] == -3.0);
}

TEST_CASE("dialect: BOM, CRLF, quotes, missing final newline, column order", "[ingest]") {
  TempDir dir;
  const auto p = dir.write("a.csv",
                           "\xEF\xBB\xBF" "meter_id,flow,timestamp,energy,forward_temp,return_temp,energy_computed,extra\r\n"
                           "\"m,1\",100,2020-01-01 00:30,1.25,70,40,1.3,\"say \"\"hi\"\"\"\r\n"
                           "m2, 7 ,2020-01-01T00:00:00+01:00,2,70,40,2,x");
  const auto r = load_one(p);
  REQUIRE(r.report.rows_rejected == 0);
  const auto& t = r.table;
  REQUIRE(t.row_count() == 2);
  CHECK(t.meter_ids() == std::vector<std::string>{"m,1", "m2"});
  // m2 local midnight at +01:00 is 23:00 the previous day
  CHECK(t.row_times()[0] == utc("2019-12-31T23:00:00Z"));
  CHECK(t.row_times()[1] == utc("2020-01-01T00:00:00Z"));
  CHECK(t.column("flow").values[0] == 7.0);
  CHECK(t.column("energy").values[1] == 1.25);
}

TEST_CASE("schema remaps headers", "[ingest]") {
  TempDir dir;
  const auto schema = parse_schema(R"(
columns:
  timestamp: Time
  meter_id: Meter
measurements:
  - {name: energy, source: E, unit: MWh}
timezone: Europe/Copenhagen
)");
  const auto p = dir.write("a.csv", "Time,Meter,E\n2020-07-01T12:00,m,3\n");
  const auto r = load_one(p, schema);
  REQUIRE(r.table.row_count() == 1);
  CHECK(r.table.column_names() == std::vector<std::string>{"energy"});
  REQUIRE(schema.rules.size() == 1);
  CHECK(schema.rules[0].column == "energy");
  CHECK(r.table.row_times()[0] == utc("2020-07-01T10:00:00Z"));
}

TEST_CASE("sub-hour stamps truncate and collide as duplicates", "[ingest]") {
  TempDir dir;
  const auto p = dir.write("a.csv", std::string(kHeader) +
                                        "2020-01-01T05:10:00Z,m1,1,70,40,100,1\n"
                                        "2020-01-01T05:50:00Z,m1,2,70,40,100,2\n");
  const auto r = load_one(p);
  CHECK(r.report.duplicate_rows == 1);
  CHECK(r.table.row_times()[0] == utc("2020-01-01T05:00:00Z"));
  CHECK(r.table.column("energy").values[0] == 2.0);
}

TEST_CASE("later files win duplicates", "[ingest]") {
  TempDir dir;
  const auto a = dir.write("a.csv", std::string(kHeader) + "2020-01-01T00:00:00Z,m1,1,70,40,100,1\n");
  const auto b = dir.write("b.csv", std::string(kHeader) + "2020-01-01T00:00:00Z,m1,5,70,40,100,1\n");
  const std::vector<std::filesystem::path> paths{a, b};
  const auto r = load_csv(paths, IngestSchema::defaults());
  CHECK(r.report.duplicate_rows == 1);
  CHECK(r.table.column("energy").values[0] == 5.0);
}

TEST_CASE("fatal ingest errors", "[ingest]") {
  TempDir dir;
  SECTION("unreadable file names the file") {
    const auto missing = dir / "missing.csv";
    try {
      load_one(missing);
      FAIL("expected IngestError");
    } catch (const IngestError& e) {
      CHECK(std::string(e.what()).find("missing.csv") != std::string::npos);
    }
  }
  SECTION("unmapped column") {
    const auto p = dir.write("a.csv", "timestamp,meter_id,energy\n");
    CHECK_THROWS_AS(load_one(p), SchemaError);
  }
  SECTION("bad timezone") {
    auto schema = IngestSchema::defaults();
    schema.default_timezone = "Mars/Olympus";
    CHECK_THROWS_AS(load_one(dir.write("a.csv", kHeader), schema), SchemaError);
  }
}

TEST_CASE("timestamp parsing and DST", "[time]") {
  const auto cph = TimeZoneRule::parse("Europe/Copenhagen");
  CHECK(parse_timestamp("2020-01-15T12:00:00", cph) == utc("2020-01-15T11:00:00Z"));
  CHECK(parse_timestamp("2020-07-15T12:00:00", cph) == utc("2020-07-15T10:00:00Z"));
  // spring forward 2020-03-29: 02:xx local does not exist
  CHECK(parse_timestamp("2020-03-29T01:00", cph) == utc("2020-03-29T00:00:00Z"));
  CHECK(parse_timestamp("2020-03-29T03:00", cph) == utc("2020-03-29T01:00:00Z"));
  // fall back 2020-10-25: 02:xx local occurs twice, first occurrence chosen
  CHECK(parse_timestamp("2020-10-25T02:00", cph) == utc("2020-10-25T00:00:00Z"));
  CHECK(parse_timestamp("2020-10-25T03:00", cph) == utc("2020-10-25T02:00:00Z"));
  // explicit offsets override the zone
  CHECK(parse_timestamp("2020-07-15T12:00:00Z", cph) == utc("2020-07-15T12:00:00Z"));
  CHECK(parse_timestamp("2020-07-15T12:00:00-05:30", cph) == utc("2020-07-15T17:00:00Z"));
  CHECK_FALSE(parse_timestamp("2020-02-30T00:00", cph));
  CHECK_FALSE(parse_timestamp("2020-01-01T25:00", cph));
  CHECK_FALSE(parse_timestamp("garbage", cph));
  CHECK(format_timestamp(utc("2024-09-04T23:59:59Z")) == "2024-09-04T23:00:00Z");
  CHECK(hour_of_day(utc("2024-09-04T07:30:00Z")) == 7);
  CHECK(format_date(date_of(utc("2024-09-04T07:30:00Z"))) == "2024-09-04");
}

TEST_CASE("schema config parsing", "[schema]") {
  const auto d = IngestSchema::defaults();
  CHECK(d.measurements.size() == 5);
  CHECK(d.window_mode == WindowMode::kFirstToLast);
  CHECK(d.rules.size() == 3);
  CHECK(schema_from_canonical(d.canonical()).canonical() == d.canonical());

  const auto s = parse_schema("window_mode: first_to_dataset_end\nnull_sentinels: ['NULL', '-']\nrules: []\n");
  CHECK(s.window_mode == WindowMode::kFirstToDatasetEnd);
  CHECK(s.null_sentinels == std::vector<std::string>{"NULL", "-"});
  CHECK(s.rules.empty());
  CHECK(s.measurements.size() == 5);

  const auto r = parse_schema("rules:\n  - {column: forward_temp, max: 130}\n");
  REQUIRE(r.rules.size() == 1);
  CHECK(r.rules[0].violated_by(131));
  CHECK_FALSE(r.rules[0].violated_by(130));
  CHECK(d.rules[0].violated_by(-0.1));
  CHECK_FALSE(d.rules[0].violated_by(0.0));

  CHECK_THROWS_AS(parse_schema("window_mode: sometimes\n"), SchemaError);
  CHECK_THROWS_AS(parse_schema("null_sentinels: [NULL]\n"), SchemaError);
  CHECK_THROWS_AS(parse_schema("rules:\n  - {column: nope, min: 0}\n"), SchemaError);
  CHECK_THROWS_AS(parse_schema("timezone: Mars/Olympus\n"), SchemaError);
  CHECK_THROWS_AS(parse_schema("measurements: [{name: a}, {name: a}]\n"), SchemaError);
  CHECK_THROWS_AS(parse_schema(": : :\n  - ]["), SchemaError);
}
