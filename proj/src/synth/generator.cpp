#include "dhdiag/synth/generator.hpp"

#include <nlohmann/json.hpp>
#include <yaml-cpp/yaml.h>

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <fstream>
#include <numbers>
#include <ostream>
#include <random>
#include <sstream>

namespace dhdiag::synth {

using std::chrono::days;
using std::chrono::hours;

namespace {

// Bit-stable uniform and normal variates; std distributions differ across libraries.
class Random {
 public:
  explicit Random(std::uint64_t seed) : engine_(seed) {}
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  std::size_t below(std::size_t n) { return static_cast<std::size_t>(uniform() * static_cast<double>(n)); }
  bool chance(double p) { return p > 0.0 && uniform() < p; }
  double normal() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    double u1 = uniform();
    while (u1 <= 0.0) u1 = uniform();
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    spare_ = r * std::sin(2.0 * std::numbers::pi * u2);
    has_spare_ = true;
    return r * std::cos(2.0 * std::numbers::pi * u2);
  }
  template <typename T>
  void shuffle(std::vector<T>& v) {
    for (std::size_t i = v.size(); i > 1; --i) std::swap(v[i - 1], v[below(i)]);
  }

 private:
  std::mt19937_64 engine_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

struct MeterPlan {
  std::string id;
  double scale = 1.0;
  double computed_factor = 1.0;
  std::size_t start_hour = 0;
  bool dead = false;
};

void check_rate(double v, const char* field) {
  if (!(v >= 0.0 && v <= 1.0)) throw ConfigError(field, "must be within [0, 1]");
}
void check_positive(double v, const char* field) {
  if (!(v > 0.0) || !std::isfinite(v)) throw ConfigError(field, "must be positive");
}
void check_non_negative(double v, const char* field) {
  if (!(v >= 0.0) || !std::isfinite(v)) throw ConfigError(field, "must be non-negative");
}

class CsvWriter {
 public:
  explicit CsvWriter(std::ostream& out) : out_(out) { buf_.reserve(1 << 20); }
  ~CsvWriter() { flush(); }
  void text(std::string_view s) { buf_.append(s); }
  void number(double v, int precision) {
    std::array<char, 64> tmp;
    const auto r = std::to_chars(tmp.data(), tmp.data() + tmp.size(), v, std::chars_format::fixed, precision);
    buf_.append(tmp.data(), r.ptr);
  }
  void end_row() {
    buf_.push_back('\n');
    if (buf_.size() > (1u << 20) - 256) flush();
  }
  void flush() {
    out_.write(buf_.data(), static_cast<std::streamsize>(buf_.size()));
    buf_.clear();
  }

 private:
  std::ostream& out_;
  std::string buf_;
};

double round_to(double v, int decimals) {
  const double p = std::pow(10.0, decimals);
  return std::round(v * p) / p;
}

bool is_summer(store::Date d) {
  const unsigned m = static_cast<unsigned>(std::chrono::year_month_day{d}.month());
  return m >= 6 && m <= 8;
}

bool is_month_end(store::Date d) {
  return std::chrono::year_month_day{d + days{1}}.day() == std::chrono::day{1};
}

}  // namespace

std::size_t GeneratorConfig::hour_count() const {
  if (end < start) return 0;
  return static_cast<std::size_t>((end - start).count() + 1) * 24;
}

void GeneratorConfig::validate() const {
  if (meter_count == 0) throw ConfigError("meters", "must be at least 1");
  if (end < start) throw ConfigError("end", "must not precede start");
  check_rate(onboarding_fraction, "onboarding_fraction");
  check_positive(load.base_mwh, "load.base_mwh");
  check_non_negative(load.seasonal_amplitude_mwh, "load.seasonal_amplitude_mwh");
  check_non_negative(load.diurnal_amplitude_mwh, "load.diurnal_amplitude_mwh");
  check_non_negative(load.noise_std_mwh, "load.noise_std_mwh");
  check_rate(defects.spike_rate, "defects.spike_rate");
  check_positive(defects.spike_multiplier, "defects.spike_multiplier");
  check_rate(defects.negative_rate, "defects.negative_rate");
  if (defects.spike_rate + defects.negative_rate > 1.0)
    throw ConfigError("defects.negative_rate", "spike_rate + negative_rate must not exceed 1");
  check_rate(defects.summer_dropout_probability, "defects.summer_dropout_probability");
  check_rate(defects.month_end_fraction, "defects.month_end_fraction");
  if (defects.dead_meter_count > meter_count)
    throw ConfigError("defects.dead_meters", "exceeds the meter count");
  if (defects.whole_hour_dropout_count > 0 && defects.whole_hour_dropout_count + 2 > hour_count())
    throw ConfigError("defects.whole_hour_dropouts", "too many for the date range");
}

GeneratorConfig parse_config(std::string_view yaml_text) {
  YAML::Node root;
  try {
    root = YAML::Load(std::string(yaml_text));
  } catch (const YAML::Exception& e) {
    throw ConfigError("config", e.what());
  }
  GeneratorConfig c;
  if (!root || root.IsNull()) return c;
  if (!root.IsMap()) throw ConfigError("config", "top level must be a mapping");

  auto get = [](const YAML::Node& node, const char* key, auto& out, const std::string& field) {
    const auto n = node[key];
    if (!n) return;
    try {
      out = n.as<std::remove_reference_t<decltype(out)>>();
    } catch (const YAML::Exception&) {
      throw ConfigError(field, "bad value");
    }
  };
  auto get_date = [&](const char* key, store::Date& out) {
    const auto n = root[key];
    if (!n) return;
    std::string text;
    get(root, key, text, key);
    const auto t = store::parse_timestamp(text, store::TimeZoneRule::utc());
    if (!t || store::hour_of_day(*t) != 0 || text.size() != 10) throw ConfigError(key, "expected YYYY-MM-DD");
    out = store::date_of(*t);
  };

  for (const auto& kv : root) {
    const auto key = kv.first.as<std::string>();
    static const std::array<std::string_view, 7> known{"seed", "meters", "start", "end", "onboarding_fraction",
                                                      "load", "defects"};
    if (std::find(known.begin(), known.end(), key) == known.end()) throw ConfigError(key, "unknown key");
  }
  get(root, "seed", c.seed, "seed");
  get(root, "meters", c.meter_count, "meters");
  get_date("start", c.start);
  get_date("end", c.end);
  get(root, "onboarding_fraction", c.onboarding_fraction, "onboarding_fraction");
  if (const auto l = root["load"]) {
    get(l, "base_mwh", c.load.base_mwh, "load.base_mwh");
    get(l, "seasonal_amplitude_mwh", c.load.seasonal_amplitude_mwh, "load.seasonal_amplitude_mwh");
    get(l, "diurnal_amplitude_mwh", c.load.diurnal_amplitude_mwh, "load.diurnal_amplitude_mwh");
    get(l, "noise_std_mwh", c.load.noise_std_mwh, "load.noise_std_mwh");
  }
  if (const auto d = root["defects"]) {
    get(d, "spike_rate", c.defects.spike_rate, "defects.spike_rate");
    get(d, "spike_multiplier", c.defects.spike_multiplier, "defects.spike_multiplier");
    get(d, "negative_rate", c.defects.negative_rate, "defects.negative_rate");
    get(d, "summer_dropout_probability", c.defects.summer_dropout_probability,
        "defects.summer_dropout_probability");
    get(d, "month_end_dropout", c.defects.month_end_dropout, "defects.month_end_dropout");
    get(d, "month_end_fraction", c.defects.month_end_fraction, "defects.month_end_fraction");
    get(d, "dead_meters", c.defects.dead_meter_count, "defects.dead_meters");
    get(d, "whole_hour_dropouts", c.defects.whole_hour_dropout_count, "defects.whole_hour_dropouts");
  }
  c.validate();
  return c;
}

GeneratorConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config", "cannot read " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str());
}

GroundTruth generate(const GeneratorConfig& config, std::ostream& csv) {
  config.validate();
  Random rng(config.seed);
  const std::size_t H = config.hour_count();
  const std::size_t N = config.meter_count;
  const store::HourStamp t0{config.start};
  const auto& load = config.load;
  const auto& defects = config.defects;

  GroundTruth gt;
  gt.seed = config.seed;

  const int width = std::max<int>(5, static_cast<int>(std::to_string(N).size()));
  std::vector<MeterPlan> meters(N);
  for (std::size_t m = 0; m < N; ++m) {
    std::string digits = std::to_string(m + 1);
    meters[m].id = "M" + std::string(static_cast<std::size_t>(width) - digits.size(), '0') + digits;
    meters[m].scale = rng.uniform(0.8, 1.2);
    meters[m].computed_factor = rng.uniform(1.0, 1.04);
    gt.meter_ids.push_back(meters[m].id);
  }

  // Late starters never include the first meter, so the first hour is populated.
  const auto late = std::min<std::size_t>(N - 1, static_cast<std::size_t>(std::llround(config.onboarding_fraction * N)));
  std::vector<std::size_t> order(N - 1);
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i + 1;
  rng.shuffle(order);
  for (std::size_t i = 0; i < late && H > 2; ++i) {
    meters[order[i]].start_hour = 1 + rng.below(H - 2);
    gt.late_meters.push_back(meters[order[i]].id);
  }
  std::sort(gt.late_meters.begin(), gt.late_meters.end());

  std::vector<std::size_t> all(N);
  for (std::size_t i = 0; i < N; ++i) all[i] = i;
  rng.shuffle(all);
  for (std::size_t i = 0; i < defects.dead_meter_count; ++i) {
    meters[all[i]].dead = true;
    gt.dead_meters.push_back(meters[all[i]].id);
  }
  std::sort(gt.dead_meters.begin(), gt.dead_meters.end());

  // Whole-hour dropouts avoid the first and last hour so the grid span is kept.
  std::vector<bool> hour_dropped(H, false);
  std::size_t dropped = 0;
  while (dropped < defects.whole_hour_dropout_count) {
    const std::size_t h = 1 + rng.below(H - 2);
    if (hour_dropped[h]) continue;
    hour_dropped[h] = true;
    ++dropped;
  }
  for (std::size_t h = 0; h < H; ++h)
    if (hour_dropped[h]) gt.whole_hour_dropouts.push_back(t0 + hours{h});

  CsvWriter out(csv);
  out.text("timestamp,meter_id,energy,forward_temp,return_temp,flow,energy_computed\n");

  std::vector<std::uint8_t> summer_drop(N, 0);
  std::vector<std::uint8_t> month_end_drop(N, 0);
  std::vector<std::size_t> summer_removed(N, 0);
  std::vector<std::size_t> month_end_removed(N, 0);
  const double two_pi = 2.0 * std::numbers::pi;

  for (std::size_t h = 0; h < H; ++h) {
    const store::HourStamp t = t0 + hours{h};
    const store::Date date = store::date_of(t);
    const int hod = store::hour_of_day(t);

    if (hod == 0 || h == 0) {
      const bool summer = is_summer(date);
      const bool month_end = defects.month_end_dropout && is_month_end(date);
      for (std::size_t m = 0; m < N; ++m) {
        summer_drop[m] = summer && rng.chance(defects.summer_dropout_probability);
        month_end_drop[m] = month_end && rng.chance(defects.month_end_fraction);
      }
    }
    const std::string stamp = store::format_timestamp(t);
    const double doy = static_cast<double>((date - store::Date{std::chrono::year_month_day{date}.year() / 1 / 1}).count());
    const double season = std::cos(two_pi * (doy - 15.0) / 365.25);
    const double diurnal = std::sin(two_pi * (hod - 3) / 24.0);

    // Keep at least one meter in every hour that is not a deliberate dropout.
    std::size_t keeper = N;
    if (!hour_dropped[h]) {
      bool any = false;
      for (std::size_t m = 0; m < N && !any; ++m)
        any = meters[m].start_hour <= h && !summer_drop[m] && !month_end_drop[m];
      if (!any)
        for (std::size_t m = 0; m < N && keeper == N; ++m)
          if (meters[m].start_hour <= h) keeper = m;
    }

    for (std::size_t m = 0; m < N; ++m) {
      auto& mp = meters[m];
      if (mp.start_hour > h) continue;
      // Draw every variate for every active meter-hour so the stream does not
      // depend on which rows are dropped.
      const double noise = rng.normal();
      const double fwd_noise = rng.normal();
      const double ret_noise = rng.normal();
      const double flow_noise = rng.normal();
      const double defect_draw = rng.uniform();
      const double defect_size = rng.uniform();

      if (hour_dropped[h]) continue;
      if (m != keeper) {
        if (summer_drop[m]) {
          ++summer_removed[m];
          continue;
        }
        if (month_end_drop[m]) {
          ++month_end_removed[m];
          continue;
        }
      }
      ++gt.rows;
      out.text(stamp);
      out.text(",");
      out.text(mp.id);
      if (mp.dead) {
        out.text(",,,,,");
        out.end_row();
        continue;
      }
      const double level = load.base_mwh + load.seasonal_amplitude_mwh * season + load.diurnal_amplitude_mwh * diurnal;
      const double clean = round_to(std::max(0.0, mp.scale * (level + load.noise_std_mwh * noise)), 6);
      const double forward = round_to(70.0 + 8.0 * season + 0.8 * fwd_noise, 3);
      const double ret = round_to(40.0 + 4.0 * season + 0.8 * ret_noise, 3);
      const double delta_t = std::max(forward - ret, 5.0);
      const double flow = round_to(std::max(0.0, clean * 1e6 / (1.163 * delta_t) * (1.0 + 0.02 * flow_noise)), 2);
      const double computed = round_to(clean * mp.computed_factor, 6);

      double energy = clean;
      if (defect_draw < defects.spike_rate) {
        energy = round_to(clean + defects.spike_multiplier * mp.scale * load.base_mwh * (1.0 + defect_size), 6);
        gt.spikes.push_back({mp.id, t, energy});
      } else if (defect_draw < defects.spike_rate + defects.negative_rate) {
        energy = -round_to(0.001 + 0.05 * defect_size, 6);
        gt.negatives.push_back({mp.id, t, energy});
      }
      out.text(",");
      out.number(energy, 6);
      out.text(",");
      out.number(forward, 3);
      out.text(",");
      out.number(ret, 3);
      out.text(",");
      out.number(flow, 2);
      out.text(",");
      out.number(computed, 6);
      out.end_row();
    }

    if (hod == 23 || h + 1 == H) {
      for (std::size_t m = 0; m < N; ++m) {
        if (summer_removed[m] > 0) gt.summer_dropouts.push_back({meters[m].id, date, summer_removed[m]});
        if (month_end_removed[m] > 0) gt.month_end_dropouts.push_back({meters[m].id, date, month_end_removed[m]});
        summer_removed[m] = 0;
        month_end_removed[m] = 0;
      }
    }
  }
  out.flush();
  if (!csv) throw std::runtime_error("failed writing generated CSV");
  return gt;
}

std::string GroundTruth::to_json() const {
  using nlohmann::ordered_json;
  auto cells = [](const std::vector<CellDefect>& v) {
    ordered_json a = ordered_json::array();
    for (const auto& d : v)
      a.push_back({{"meter_id", d.meter_id}, {"timestamp", store::format_timestamp(d.timestamp)}, {"value", d.value}});
    return a;
  };
  auto day_drops = [](const std::vector<DayDropout>& v) {
    ordered_json a = ordered_json::array();
    for (const auto& d : v)
      a.push_back({{"meter_id", d.meter_id}, {"date", store::format_date(d.date)}, {"hours", d.hours}});
    return a;
  };
  auto sum_hours = [](const std::vector<DayDropout>& v) {
    std::size_t n = 0;
    for (const auto& d : v) n += d.hours;
    return n;
  };
  ordered_json j;
  j["seed"] = seed;
  j["counts"] = {{"rows", rows},
                 {"meters", meter_ids.size()},
                 {"dead_meters", dead_meters.size()},
                 {"late_meters", late_meters.size()},
                 {"negatives", negatives.size()},
                 {"spikes", spikes.size()},
                 {"whole_hour_dropouts", whole_hour_dropouts.size()},
                 {"summer_dropout_rows", sum_hours(summer_dropouts)},
                 {"month_end_dropout_rows", sum_hours(month_end_dropouts)}};
  j["dead_meters"] = dead_meters;
  j["late_meters"] = late_meters;
  ordered_json hours_out = ordered_json::array();
  for (const auto& t : whole_hour_dropouts) hours_out.push_back(store::format_timestamp(t));
  j["whole_hour_dropouts"] = hours_out;
  j["negatives"] = cells(negatives);
  j["spikes"] = cells(spikes);
  j["summer_dropouts"] = day_drops(summer_dropouts);
  j["month_end_dropouts"] = day_drops(month_end_dropouts);
  return j.dump(2) + "\n";
}

GroundTruth generate_to_dir(const GeneratorConfig& config, const std::filesystem::path& dir) {
  config.validate();
  std::filesystem::create_directories(dir);
  std::ofstream csv(dir / kReadingsFile, std::ios::binary | std::ios::trunc);
  if (!csv) throw std::runtime_error("cannot write " + (dir / kReadingsFile).string());
  auto gt = generate(config, csv);
  csv.close();
  std::ofstream js(dir / kGroundTruthFile, std::ios::binary | std::ios::trunc);
  js << gt.to_json();
  if (!js) throw std::runtime_error("cannot write " + (dir / kGroundTruthFile).string());
  return gt;
}

}  // namespace dhdiag::synth
