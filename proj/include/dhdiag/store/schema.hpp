#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "dhdiag/store/activity_mode.hpp"

namespace dhdiag::store {

struct MeasurementSpec {
  std::string name;    // canonical column name
  std::string source;  // header in the source CSV
  std::string unit;
};

enum class BoundKind { kMin, kMax };

// Physical bound on a column. Min bounds are inclusive: 0 is legal for "min 0".
struct BoundRule {
  std::string column;
  BoundKind kind = BoundKind::kMin;
  double bound = 0.0;

  bool violated_by(double value) const noexcept {
    return kind == BoundKind::kMin ? value < bound : value > bound;
  }
};

struct IngestSchema {
  std::string timestamp_source = "timestamp";
  std::string meter_id_source = "meter_id";
  std::vector<MeasurementSpec> measurements;
  std::string default_timezone = "UTC";
  std::vector<std::string> null_sentinels;  // the empty field is always null
  WindowMode window_mode = WindowMode::kFirstToLast;
  std::vector<BoundRule> rules;

  // energy, forward_temp, return_temp, flow, energy_computed with identity
  // header mapping and the non-negativity rules for energy, energy_computed, flow.
  static IngestSchema defaults();

  // Stable JSON text; part of the cache fingerprint.
  std::string canonical() const;
};

std::vector<BoundRule> default_rules();

// YAML. Omitted keys keep their defaults; an explicit empty `rules` list
// disables the default rules. Throws SchemaError.
IngestSchema parse_schema(std::string_view yaml_text);
IngestSchema load_schema(const std::filesystem::path& path);

// Inverse of IngestSchema::canonical().
IngestSchema schema_from_canonical(std::string_view json_text);

}  // namespace dhdiag::store
