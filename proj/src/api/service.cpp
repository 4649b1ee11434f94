#include "dhdiag/api/service.hpp"

#include <spdlog/spdlog.h>

#include <charconv>
#include <fstream>
#include <sstream>

#include "dhdiag/api/json_io.hpp"
#include "dhdiag/store/errors.hpp"
#include "dhdiag/store/time.hpp"

namespace dhdiag::api {

namespace {

constexpr std::size_t kMaxHistogramBins = 10000;
constexpr std::size_t kMaxPageSize = 10000;

ApiError bad_parameter(std::string_view name, std::string_view why) {
  return ApiError(400, "BAD_PARAMETER", "parameter '" + std::string(name) + "' " + std::string(why));
}

std::optional<std::string_view> param(const Params& p, std::string_view name) {
  const auto it = p.find(name);
  if (it == p.end()) return std::nullopt;
  return std::string_view(it->second);
}

std::string_view required(const Params& p, std::string_view name) {
  const auto v = param(p, name);
  if (!v || v->empty()) throw bad_parameter(name, "is required");
  return *v;
}

std::optional<std::string_view> optional_text(const Params& p, std::string_view name) {
  const auto v = param(p, name);
  if (!v || v->empty()) return std::nullopt;
  return v;
}

std::uint64_t unsigned_param(const Params& p, std::string_view name, std::uint64_t fallback, std::uint64_t min,
                             std::uint64_t max) {
  const auto v = optional_text(p, name);
  if (!v) return fallback;
  std::uint64_t out = 0;
  const auto r = std::from_chars(v->data(), v->data() + v->size(), out);
  if (r.ec != std::errc{} || r.ptr != v->data() + v->size())
    throw bad_parameter(name, "must be a non-negative integer");
  if (out < min || out > max)
    throw bad_parameter(name, "must be within [" + std::to_string(min) + ", " + std::to_string(max) + "]");
  return out;
}

bool bool_param(const Params& p, std::string_view name, bool fallback) {
  const auto v = optional_text(p, name);
  if (!v) return fallback;
  if (*v == "true" || *v == "1") return true;
  if (*v == "false" || *v == "0") return false;
  throw bad_parameter(name, "must be true or false");
}

std::optional<store::HourStamp> time_param(const Params& p, std::string_view name) {
  const auto v = optional_text(p, name);
  if (!v) return std::nullopt;
  const auto t = store::parse_timestamp(*v, store::TimeZoneRule::utc());
  if (!t) throw bad_parameter(name, "must be an ISO 8601 timestamp");
  return t;
}

std::string dump(const Json& j) { return j.dump(); }

Response json_response(const Json& j) { return {200, "application/json", dump(j)}; }

bool safe_file_name(std::string_view name) {
  if (name.empty() || name.front() == '.') return false;
  for (const char c : name)
    if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '.' || c == '_' || c == '-')) return false;
  return true;
}

std::string_view mime_type(const std::filesystem::path& p) {
  const auto ext = p.extension().string();
  if (ext == ".html") return "text/html; charset=utf-8";
  if (ext == ".js") return "text/javascript";
  if (ext == ".css") return "text/css";
  if (ext == ".json") return "application/schema+json";
  if (ext == ".svg") return "image/svg+xml";
  return "application/octet-stream";
}

}  // namespace

Response error_response(const ApiError& e) {
  Json j{{"status", e.status()}, {"code", e.code()}, {"message", std::string(e.what())}};
  return {e.status(), "application/json", dump(j)};
}

Service::Service(std::shared_ptr<diag::Dataset> dataset, ServiceConfig config)
    : dataset_(std::move(dataset)), config_(std::move(config)) {
  if (!dataset_) throw std::invalid_argument("service needs a dataset");
}

Response Service::handle(std::string_view path, const Params& params) const {
  try {
    return route(path, params);
  } catch (const ApiError& e) {
    return error_response(e);
  } catch (const store::UnknownColumnError& e) {
    return error_response(ApiError(404, "UNKNOWN_COLUMN", e.what()));
  } catch (const store::UnknownMeterError& e) {
    return error_response(ApiError(404, "UNKNOWN_METER", e.what()));
  } catch (const diag::FilterError& e) {
    return error_response(ApiError(400, "BAD_FILTER", e.what()));
  } catch (const std::invalid_argument& e) {
    return error_response(ApiError(400, "BAD_PARAMETER", e.what()));
  } catch (const std::exception& e) {
    spdlog::error("{}: {}", path, e.what());
    return error_response(ApiError(500, "INTERNAL", e.what()));
  }
}

Response Service::file(const std::filesystem::path& dir, std::string_view name) const {
  if (!safe_file_name(name)) throw ApiError(404, "NOT_FOUND", "no such file");
  const auto p = dir / std::string(name);
  std::ifstream in(p, std::ios::binary);
  if (!in) throw ApiError(404, "NOT_FOUND", "no such file: " + std::string(name));
  std::stringstream buf;
  buf << in.rdbuf();
  return {200, std::string(mime_type(p)), buf.str()};
}

Response Service::route(std::string_view path, const Params& params) const {
  auto& ds = *dataset_;
  const auto& table = ds.table();

  if (path == "/" || path == "/index.html") return file(config_.web_dir, "index.html");
  if (path.starts_with("/static/")) return file(config_.web_dir, path.substr(8));
  if (path.starts_with("/docs/schemas/")) return file(config_.schema_dir, path.substr(14));
  if (path == "/api/summary") return json_response(summary_json(table, ds.options()));
  if (path == "/api/columns") return json_response(Json(table.column_names()));
  if (!path.starts_with("/api/")) throw ApiError(404, "NOT_FOUND", "no such path: " + std::string(path));

  const bool known = path == "/api/kpi" || path == "/api/boxplot" || path == "/api/histogram" ||
                     path == "/api/heatmap/missing" || path == "/api/heatmap/meters" ||
                     path == "/api/timestamps/missing" || path == "/api/violations" || path == "/api/correlation" ||
                     path == "/api/scatter" || path == "/api/timeseries" || path == "/api/meters" ||
                     path == "/api/meters/export";
  if (!known) throw ApiError(404, "NOT_FOUND", "no such endpoint: " + std::string(path));
  if (table.empty()) throw ApiError(404, "NO_DATA", "the dataset holds no readings");

  if (path == "/api/kpi") {
    const auto kpi = ds.kpi(required(params, "column"), optional_text(params, "meter"));
    return json_response(to_json(*kpi));
  }
  if (path == "/api/boxplot") {
    const auto column = required(params, "column");
    const auto meter = optional_text(params, "meter");
    const auto b = ds.boxplot(column, meter);
    return json_response({{"column", column},
                          {"meter_id", meter ? Json(*meter) : Json(nullptr)},
                          {"stats", *b ? to_json(**b) : Json(nullptr)}});
  }
  if (path == "/api/histogram") {
    const auto column = required(params, "column");
    const auto meter = optional_text(params, "meter");
    const auto bins = unsigned_param(params, "bins", stats::kDefaultHistogramBins, 1, kMaxHistogramBins);
    const auto h = ds.histogram(column, meter, bins);
    return json_response({{"column", column},
                          {"meter_id", meter ? Json(*meter) : Json(nullptr)},
                          {"bins", bins},
                          {"histogram", *h ? to_json(**h) : Json(nullptr)}});
  }
  if (path == "/api/heatmap/missing")
    return json_response(
        to_json(*ds.missing_value_heatmap(required(params, "column"), bool_param(params, "normalize", false))));
  if (path == "/api/heatmap/meters")
    return json_response(to_json(*ds.missing_meter_heatmap(bool_param(params, "normalize", false))));
  if (path == "/api/timestamps/missing") return json_response(to_json(*ds.missing_timestamps()));
  if (path == "/api/violations") return json_response(to_json(*ds.violations()));
  if (path == "/api/correlation") {
    const auto text = optional_text(params, "method").value_or("pearson");
    const auto method = diag::parse_correlation_method(text);
    if (!method) throw bad_parameter("method", "must be pearson or spearman");
    return json_response(to_json(*ds.correlation(*method)));
  }
  if (path == "/api/scatter") {
    const auto x = required(params, "x");
    const auto y = required(params, "y");
    const auto max_points = unsigned_param(params, "max_points", diag::kDefaultScatterPoints, 1,
                                           std::numeric_limits<std::uint32_t>::max());
    const auto seed = unsigned_param(params, "seed", 0, 0, std::numeric_limits<std::uint64_t>::max());
    auto j = to_json(diag::scatter_sample(table, x, y, max_points, seed));
    j["max_points"] = max_points;
    return json_response(j);
  }
  if (path == "/api/timeseries") {
    const auto from = time_param(params, "from");
    const auto to = time_param(params, "to");
    if (from && to && *from > *to) throw bad_parameter("from", "must not be after 'to'");
    const auto max_points = unsigned_param(params, "max_points", diag::kDefaultTimeseriesPoints, 1,
                                           std::numeric_limits<std::uint32_t>::max());
    return json_response(to_json(diag::timeseries_window(table, required(params, "meter"), required(params, "column"),
                                                         from, to, max_points, ds.options().window_mode)));
  }
  const auto stats = ds.meter_stats();
  if (path == "/api/meters") {
    diag::MeterQuery q;
    q.filter = std::string(param(params, "filter").value_or(""));
    if (const auto s = optional_text(params, "sort")) q.sort = std::string(*s);
    q.page = unsigned_param(params, "page", 0, 0, std::numeric_limits<std::uint32_t>::max());
    q.page_size = unsigned_param(params, "page_size", q.page_size, 1, kMaxPageSize);
    return json_response(to_json(diag::query_meter_stats(*stats, q), stats->columns));
  }
  // /api/meters/export
  const auto ids = diag::select_meters(*stats, param(params, "filter").value_or(""));
  return {200, "text/csv; charset=utf-8", diag::export_meter_list(ids)};
}

}  // namespace dhdiag::api
