#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "dhdiag/store/time.hpp"

namespace dhdiag::synth {

class ConfigError : public std::invalid_argument {
 public:
  ConfigError(std::string field, const std::string& message)
      : std::invalid_argument(field + ": " + message), field_(std::move(field)) {}
  const std::string& field() const noexcept { return field_; }

 private:
  std::string field_;
};

// Hourly load model per meter, before the per-meter scale factor.
struct LoadModel {
  double base_mwh = 0.012;
  double seasonal_amplitude_mwh = 0.006;  // winter peak
  double diurnal_amplitude_mwh = 0.002;
  double noise_std_mwh = 0.0008;
};

struct DefectSpec {
  double spike_rate = 0.0;          // per present, live row
  double spike_multiplier = 25.0;   // times the meter's base level, added to energy
  double negative_rate = 0.0;       // per present, live row
  double summer_dropout_probability = 0.0;  // per meter-day in June to August
  bool month_end_dropout = false;
  double month_end_fraction = 0.5;  // share of meters missing on the last day of a month
  std::size_t dead_meter_count = 0;  // rows present, every cell null
  std::size_t whole_hour_dropout_count = 0;  // hours with no rows at all
};

struct GeneratorConfig {
  std::uint64_t seed = 1;
  std::size_t meter_count = 20;
  store::Date start = store::Date{std::chrono::year{2023} / 1 / 1};
  store::Date end = store::Date{std::chrono::year{2023} / 12 / 31};  // inclusive
  double onboarding_fraction = 0.0;  // meters starting at a uniform hour after the start
  LoadModel load;
  DefectSpec defects;

  std::size_t hour_count() const;
  // Throws ConfigError naming the field.
  void validate() const;
};

// YAML: seed, meters, start, end, onboarding_fraction, load: {...}, defects: {...}.
// Omitted keys keep defaults. Throws ConfigError.
GeneratorConfig parse_config(std::string_view yaml_text);
GeneratorConfig load_config(const std::filesystem::path& path);

struct CellDefect {
  std::string meter_id;
  store::HourStamp timestamp;
  double value = 0.0;  // as written to the CSV
};

struct DayDropout {
  std::string meter_id;
  store::Date date;
  std::size_t hours = 0;  // rows removed
};

struct GroundTruth {
  std::uint64_t seed = 0;
  std::size_t rows = 0;
  std::vector<std::string> meter_ids;
  std::vector<std::string> dead_meters;
  std::vector<std::string> late_meters;
  std::vector<CellDefect> negatives;
  std::vector<CellDefect> spikes;
  std::vector<store::HourStamp> whole_hour_dropouts;
  std::vector<DayDropout> summer_dropouts;
  std::vector<DayDropout> month_end_dropouts;

  std::string to_json() const;
};

inline constexpr std::string_view kReadingsFile = "readings.csv";
inline constexpr std::string_view kGroundTruthFile = "ground_truth.json";

// Writes the canonical CSV dialect, rows ordered by (timestamp, meter id).
// The output is a pure function of the config.
GroundTruth generate(const GeneratorConfig& config, std::ostream& csv);

// Writes readings.csv and ground_truth.json into `dir`, creating it if needed.
GroundTruth generate_to_dir(const GeneratorConfig& config, const std::filesystem::path& dir);

}  // namespace dhdiag::synth
