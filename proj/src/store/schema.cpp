#include "dhdiag/store/schema.hpp"

#include <yaml-cpp/yaml.h>

#include <algorithm>
#include <fstream>
#include <nlohmann/json.hpp>
#include <sstream>

#include "dhdiag/store/errors.hpp"
#include "dhdiag/store/time.hpp"

namespace dhdiag::store {

std::string_view to_string(WindowMode mode) noexcept {
  return mode == WindowMode::kFirstToLast ? "first_to_last" : "first_to_dataset_end";
}

std::optional<WindowMode> parse_window_mode(std::string_view text) noexcept {
  if (text == "first_to_last") return WindowMode::kFirstToLast;
  if (text == "first_to_dataset_end") return WindowMode::kFirstToDatasetEnd;
  return std::nullopt;
}

std::vector<BoundRule> default_rules() {
  return {{"energy", BoundKind::kMin, 0.0},
          {"energy_computed", BoundKind::kMin, 0.0},
          {"flow", BoundKind::kMin, 0.0}};
}

IngestSchema IngestSchema::defaults() {
  IngestSchema s;
  s.measurements = {{"energy", "energy", "MWh"},
                    {"forward_temp", "forward_temp", "°C"},
                    {"return_temp", "return_temp", "°C"},
                    {"flow", "flow", "L/h"},
                    {"energy_computed", "energy_computed", "MWh"}};
  s.rules = default_rules();
  return s;
}

std::string IngestSchema::canonical() const {
  nlohmann::ordered_json j;
  j["timestamp_source"] = timestamp_source;
  j["meter_id_source"] = meter_id_source;
  j["measurements"] = nlohmann::ordered_json::array();
  for (const auto& m : measurements)
    j["measurements"].push_back({{"name", m.name}, {"source", m.source}, {"unit", m.unit}});
  j["default_timezone"] = default_timezone;
  j["null_sentinels"] = null_sentinels;
  j["window_mode"] = std::string(to_string(window_mode));
  j["rules"] = nlohmann::ordered_json::array();
  for (const auto& r : rules)
    j["rules"].push_back({{"column", r.column},
                          {"kind", r.kind == BoundKind::kMin ? "min" : "max"},
                          {"bound", r.bound}});
  return j.dump();
}

namespace {

template <typename T>
T scalar(const YAML::Node& node, const char* key) {
  try {
    return node.as<T>();
  } catch (const YAML::Exception&) {
    throw SchemaError(std::string("schema: bad value for '") + key + "'");
  }
}

void validate(const IngestSchema& s) {
  if (s.timestamp_source.empty() || s.meter_id_source.empty())
    throw SchemaError("schema: timestamp and meter_id sources must be non-empty");
  if (s.measurements.empty()) throw SchemaError("schema: no measurement columns");
  for (std::size_t i = 0; i < s.measurements.size(); ++i) {
    if (s.measurements[i].name.empty() || s.measurements[i].source.empty())
      throw SchemaError("schema: measurement needs a name and a source");
    for (std::size_t k = 0; k < i; ++k)
      if (s.measurements[k].name == s.measurements[i].name)
        throw SchemaError("schema: duplicate measurement '" + s.measurements[i].name + "'");
  }
  for (const auto& r : s.rules) {
    bool known = false;
    for (const auto& m : s.measurements) known = known || m.name == r.column;
    if (!known) throw SchemaError("schema: rule on unknown column '" + r.column + "'");
  }
  try {
    (void)TimeZoneRule::parse(s.default_timezone);
  } catch (const std::invalid_argument& e) {
    throw SchemaError(std::string("schema: ") + e.what());
  }
}

}  // namespace

IngestSchema parse_schema(std::string_view yaml_text) {
  YAML::Node root;
  try {
    root = YAML::Load(std::string(yaml_text));
  } catch (const YAML::Exception& e) {
    throw SchemaError(std::string("schema: ") + e.what());
  }
  IngestSchema s = IngestSchema::defaults();
  if (!root || root.IsNull()) return s;
  if (!root.IsMap()) throw SchemaError("schema: top level must be a mapping");

  if (const auto cols = root["columns"]) {
    if (!cols.IsMap()) throw SchemaError("schema: 'columns' must be a mapping");
    if (cols["timestamp"]) s.timestamp_source = scalar<std::string>(cols["timestamp"], "timestamp");
    if (cols["meter_id"]) s.meter_id_source = scalar<std::string>(cols["meter_id"], "meter_id");
  }
  if (const auto ms = root["measurements"]) {
    if (!ms.IsSequence()) throw SchemaError("schema: 'measurements' must be a list");
    s.measurements.clear();
    for (const auto& m : ms) {
      MeasurementSpec spec;
      spec.name = scalar<std::string>(m["name"], "name");
      spec.source = m["source"] ? scalar<std::string>(m["source"], "source") : spec.name;
      spec.unit = m["unit"] ? scalar<std::string>(m["unit"], "unit") : "";
      s.measurements.push_back(std::move(spec));
    }
    std::erase_if(s.rules, [&](const BoundRule& r) {
      return std::none_of(s.measurements.begin(), s.measurements.end(),
                          [&](const MeasurementSpec& m) { return m.name == r.column; });
    });
  }
  if (const auto tz = root["timezone"]) s.default_timezone = scalar<std::string>(tz, "timezone");
  if (const auto ns = root["null_sentinels"]) {
    if (!ns.IsSequence()) throw SchemaError("schema: 'null_sentinels' must be a list");
    for (const auto& n : ns) {
      // YAML reads bare NULL, null and ~ as the null value; the spelling is lost
      if (n.IsNull()) throw SchemaError("schema: quote null-like sentinels, e.g. 'NULL'");
      s.null_sentinels.push_back(scalar<std::string>(n, "null_sentinels"));
    }
  }
  if (const auto wm = root["window_mode"]) {
    const auto mode = parse_window_mode(scalar<std::string>(wm, "window_mode"));
    if (!mode) throw SchemaError("schema: window_mode must be first_to_last or first_to_dataset_end");
    s.window_mode = *mode;
  }
  if (const auto rules = root["rules"]) {
    if (!rules.IsSequence()) throw SchemaError("schema: 'rules' must be a list");
    s.rules.clear();
    for (const auto& r : rules) {
      const auto column = scalar<std::string>(r["column"], "column");
      if (r["min"]) s.rules.push_back({column, BoundKind::kMin, scalar<double>(r["min"], "min")});
      if (r["max"]) s.rules.push_back({column, BoundKind::kMax, scalar<double>(r["max"], "max")});
      if (!r["min"] && !r["max"]) throw SchemaError("schema: rule on '" + column + "' has no bound");
    }
  }
  validate(s);
  return s;
}

IngestSchema load_schema(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw SchemaError("cannot read schema file: " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_schema(buf.str());
}

IngestSchema schema_from_canonical(std::string_view json_text) {
  IngestSchema s;
  try {
    const auto j = nlohmann::json::parse(json_text);
    s.timestamp_source = j.at("timestamp_source").get<std::string>();
    s.meter_id_source = j.at("meter_id_source").get<std::string>();
    for (const auto& m : j.at("measurements"))
      s.measurements.push_back({m.at("name"), m.at("source"), m.at("unit")});
    s.default_timezone = j.at("default_timezone").get<std::string>();
    s.null_sentinels = j.at("null_sentinels").get<std::vector<std::string>>();
    const auto mode = parse_window_mode(j.at("window_mode").get<std::string>());
    if (!mode) throw SchemaError("schema: bad window_mode");
    s.window_mode = *mode;
    for (const auto& r : j.at("rules"))
      s.rules.push_back({r.at("column"), r.at("kind") == "min" ? BoundKind::kMin : BoundKind::kMax,
                         r.at("bound").get<double>()});
  } catch (const nlohmann::json::exception& e) {
    throw SchemaError(std::string("schema: ") + e.what());
  }
  validate(s);
  return s;
}

}  // namespace dhdiag::store
