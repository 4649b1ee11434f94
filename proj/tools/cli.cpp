#include "cli.hpp"

#include <CLI11.hpp>
#include <spdlog/spdlog.h>

#include <algorithm>
#include <fstream>
#include <iomanip>

#include "dhdiag/api/json_io.hpp"
#include "dhdiag/api/service.hpp"
#include "dhdiag/diag/dataset.hpp"
#include "dhdiag/store/errors.hpp"
#include "dhdiag/store/pipeline.hpp"
#include "dhdiag/synth/generator.hpp"

namespace dhdiag::cli {

namespace {

namespace fs = std::filesystem;
using api::Json;

struct LoadedCache {
  store::ReadingTable table;
  diag::DiagnosticsOptions options;
};

LoadedCache load_cache(const fs::path& dir) {
  auto cached = store::open_cache(dir);
  const auto schema = store::schema_from_canonical(cached.manifest.schema_json);
  return {std::move(cached.table), diag::DiagnosticsOptions::from_schema(schema)};
}

store::IngestSchema schema_or_default(const std::string& path) {
  return path.empty() ? store::IngestSchema::defaults() : store::load_schema(path);
}

std::vector<fs::path> csv_files_in(const fs::path& dir) {
  std::vector<fs::path> files;
  for (const auto& e : fs::directory_iterator(dir))
    if (e.is_regular_file() && e.path().extension() == ".csv") files.push_back(e.path());
  std::sort(files.begin(), files.end());
  if (files.empty()) throw store::IngestError("no .csv files in " + dir.string());
  return files;
}

int exit_code(diag::QualityStatus s) {
  switch (s) {
    case diag::QualityStatus::kRed:
      return kExitRed;
    case diag::QualityStatus::kYellow:
      return kExitYellow;
    default:
      return kExitGreen;
  }
}

std::string percent(double rate) {
  std::ostringstream s;
  s << std::fixed << std::setprecision(2) << rate * 100.0 << '%';
  return s.str();
}

void print_ingest(const store::IngestOutcome& r, std::ostream& out) {
  if (r.cache_hit) {
    out << "cache up to date: " << r.manifest.row_count << " rows, " << r.manifest.meter_count << " meters\n";
    return;
  }
  const auto& rep = *r.report;
  out << "rows read:       " << rep.rows_read << "\n"
      << "rows accepted:   " << rep.rows_accepted << "\n"
      << "rows rejected:   " << rep.rows_rejected << "\n"
      << "duplicate rows:  " << rep.duplicate_rows << "\n"
      << "non-finite cells: " << rep.nonfinite_cells << "\n"
      << "meters:          " << r.table.meter_count() << "\n";
  for (const auto& e : rep.errors) out << "  " << e.file << ":" << e.line << ": " << e.message << "\n";
}

struct ReportArgs {
  std::string cache_dir;
  std::string column;
  std::string meter;
  std::string format = "text";
};

int report(const ReportArgs& a, std::ostream& out) {
  auto loaded = load_cache(a.cache_dir);
  diag::Dataset ds(std::move(loaded.table), loaded.options);
  const auto& table = ds.table();
  std::optional<std::string_view> meter;
  if (!a.meter.empty()) meter = a.meter;
  std::vector<std::string> columns = a.column.empty() ? table.column_names() : std::vector<std::string>{a.column};

  std::vector<std::shared_ptr<const diag::ColumnKpi>> kpis;
  for (const auto& c : columns) kpis.push_back(ds.kpi(c, meter));
  const auto missing = ds.missing_timestamps();
  const auto violations = ds.violations();
  diag::QualityStatus overall = diag::QualityStatus::kNone;
  for (const auto& k : kpis) overall = diag::worst(overall, k->overall_status());

  if (a.format == "json") {
    Json j;
    j["kpis"] = Json::array();
    for (const auto& k : kpis) j["kpis"].push_back(api::to_json(*k));
    j["missing_timestamps"] = {{"count", missing->count}, {"grid_length", missing->grid_length}};
    Json rules = Json::array();
    for (const auto& r : violations->rules)
      rules.push_back({{"column", r.rule.column},
                       {"kind", r.rule.kind == store::BoundKind::kMin ? "min" : "max"},
                       {"bound", r.rule.bound},
                       {"total", r.total}});
    j["violations"] = {{"total", violations->total}, {"rules", std::move(rules)}};
    j["overall_status"] = api::to_json(overall);
    out << j.dump(2) << "\n";
    return exit_code(overall);
  }

  out << table.row_count() << " rows, " << table.meter_count() << " meters";
  if (meter) out << ", meter " << *meter;
  out << "\n\n";
  out << std::left << std::setw(18) << "column" << std::setw(18) << "anomalies" << std::setw(18) << "nulls"
      << std::setw(18) << "skewness (MC)" << std::setw(10) << "mean" << std::setw(10) << "median" << std::setw(12)
      << "violations" << "overall\n";
  for (const auto& k : kpis) {
    auto cell = [](const std::string& v, diag::QualityStatus s) { return v + " " + std::string(diag::to_string(s)); };
    std::ostringstream mc;
    if (k->skewness) mc << std::fixed << std::setprecision(3) << k->skewness->value;
    else mc << "-";
    out << std::left << std::setw(18) << k->column << std::setw(18)
        << cell(percent(k->anomaly.anomaly_rate), k->anomaly_status) << std::setw(18)
        << cell(percent(k->nulls.null_rate), k->null_status) << std::setw(18) << cell(mc.str(), k->skewness_status)
        << std::setw(10) << (k->mean_gauge ? diag::to_string(k->mean_gauge->status) : "none") << std::setw(10)
        << (k->median_gauge ? diag::to_string(k->median_gauge->status) : "none") << std::setw(12)
        << k->rule_violation_count << diag::to_string(k->overall_status()) << "\n";
    for (const auto& action : k->suggested_actions) out << "    -> " << action << "\n";
  }
  out << "\nmissing timestamps: " << missing->count << " of " << missing->grid_length << "\n";
  out << "rule violations:    " << violations->total << "\n";
  for (const auto& r : violations->rules)
    out << "  " << r.rule.column << (r.rule.kind == store::BoundKind::kMin ? " >= " : " <= ") << r.rule.bound << ": "
        << r.total << "\n";
  out << "overall: " << diag::to_string(overall) << "\n";
  return exit_code(overall);
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Data-quality diagnostics for hourly district-heating meter readings", "dhdiag"};
  app.require_subcommand(1);
  std::string log_level = "warn";
  app.add_option("--log-level", log_level, "trace, debug, info, warn, error or off")
      ->check(CLI::IsMember({"trace", "debug", "info", "warn", "error", "off"}));

  std::vector<std::string> ingest_files;
  std::string ingest_schema, ingest_cache, ingest_format = "text";
  auto* ingest = app.add_subcommand("ingest", "Parse CSV files and build or refresh the columnar cache");
  ingest->add_option("csv", ingest_files, "Input CSV files")->required()->check(CLI::ExistingFile);
  ingest->add_option("--schema", ingest_schema, "Schema YAML (default mapping when omitted)")
      ->check(CLI::ExistingFile);
  ingest->add_option("--cache-dir", ingest_cache, "Cache directory")->required();
  ingest->add_option("--format", ingest_format)->check(CLI::IsMember({"text", "json"}));

  ReportArgs report_args;
  auto* rep = app.add_subcommand("report", "One-shot quality report; exit 0 green, 1 yellow, 2 red");
  rep->add_option("--cache-dir", report_args.cache_dir, "Cache directory")->required();
  rep->add_option("--column", report_args.column, "Single column");
  rep->add_option("--meter", report_args.meter, "Restrict to one meter");
  rep->add_option("--format", report_args.format)->check(CLI::IsMember({"text", "json"}));

  std::string gen_config, gen_out;
  auto* gen = app.add_subcommand("generate", "Write a synthetic dataset with ground-truth labels");
  gen->add_option("--config", gen_config, "Generator YAML")->required()->check(CLI::ExistingFile);
  gen->add_option("--out", gen_out, "Output directory")->required();

  std::string serve_cache, serve_bind = "127.0.0.1:8080", serve_data, serve_config;
  std::string web_dir = DHDIAG_WEB_DIR, schema_dir = DHDIAG_SCHEMA_DIR;
  auto* serve = app.add_subcommand("serve", "Run the JSON API service");
  serve->add_option("--cache-dir", serve_cache, "Cache directory")->required();
  serve->add_option("--bind", serve_bind, "host:port")->capture_default_str();
  serve->add_option("--data-dir", serve_data, "Ingest the .csv files here into --cache-dir first")
      ->check(CLI::ExistingDirectory);
  serve->add_option("--config", serve_config, "Schema YAML for --data-dir")->check(CLI::ExistingFile);
  serve->add_option("--web-dir", web_dir, "Static assets served at /")->capture_default_str();
  serve->add_option("--schema-dir", schema_dir, "JSON schemas served at /docs/schemas")->capture_default_str();

  std::string export_cache, export_filter, export_out;
  auto* exp = app.add_subcommand("export-meters", "Write the ids of meters matching a filter as CSV");
  exp->add_option("--cache-dir", export_cache, "Cache directory")->required();
  exp->add_option("--filter", export_filter, "e.g. \"energy.null_rate > 0.9\"")->required();
  exp->add_option("--out", export_out, "Output CSV file")->required();

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      app.exit(e, out, err);
      return 0;
    }
    app.exit(e, out, err);
    return kExitFailure;
  }
  spdlog::set_level(spdlog::level::from_str(log_level));

  try {
    if (*ingest) {
      std::vector<fs::path> files(ingest_files.begin(), ingest_files.end());
      const auto result = store::ingest_cached(files, schema_or_default(ingest_schema), ingest_cache);
      if (ingest_format == "json") {
        Json j;
        j["cache_hit"] = result.cache_hit;
        j["row_count"] = result.manifest.row_count;
        j["meter_count"] = result.manifest.meter_count;
        j["report"] = result.report ? api::to_json(*result.report) : Json(nullptr);
        out << j.dump(2) << "\n";
      } else {
        print_ingest(result, out);
      }
      return 0;
    }
    if (*rep) return report(report_args, out);
    if (*gen) {
      const auto truth = synth::generate_to_dir(synth::load_config(gen_config), gen_out);
      out << "wrote " << truth.rows << " rows for " << truth.meter_ids.size() << " meters to "
          << (fs::path(gen_out) / synth::kReadingsFile).string() << "\n"
          << "ground truth: " << (fs::path(gen_out) / synth::kGroundTruthFile).string() << "\n";
      return 0;
    }
    if (*serve) {
      const auto [host, port] = api::parse_bind(serve_bind);
      std::shared_ptr<diag::Dataset> ds;
      if (!serve_data.empty()) {
        const auto schema = schema_or_default(serve_config);
        auto result = store::ingest_cached(csv_files_in(serve_data), schema, serve_cache);
        ds = std::make_shared<diag::Dataset>(std::move(result.table), diag::DiagnosticsOptions::from_schema(schema));
      } else {
        auto loaded = load_cache(serve_cache);
        ds = std::make_shared<diag::Dataset>(std::move(loaded.table), loaded.options);
      }
      spdlog::set_level(std::min(spdlog::get_level(), spdlog::level::info));
      api::Service service(ds, {web_dir, schema_dir});
      api::serve(service, host, port);
      return 0;
    }
    if (*exp) {
      const auto loaded = load_cache(export_cache);
      const auto stats = diag::compute_meter_stats(loaded.table, loaded.options);
      const auto ids = diag::select_meters(stats, export_filter);
      std::ofstream file(export_out, std::ios::binary | std::ios::trunc);
      file << diag::export_meter_list(ids);
      if (!file) throw std::runtime_error("cannot write " + export_out);
      out << ids.size() << " meters written to " << export_out << "\n";
      return 0;
    }
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitFailure;
  }
  return kExitFailure;
}

}  // namespace dhdiag::cli
