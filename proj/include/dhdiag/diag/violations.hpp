#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "dhdiag/store/reading_table.hpp"
#include "dhdiag/store/schema.hpp"

namespace dhdiag::diag {

inline constexpr std::size_t kMaxViolationSamples = 1000;

struct ViolationSample {
  store::HourStamp timestamp;
  std::string meter_id;
  double value = 0.0;
};

struct MeterViolationCount {
  std::string meter_id;
  std::size_t count = 0;
};

struct RuleViolations {
  store::BoundRule rule;
  std::size_t total = 0;
  std::vector<MeterViolationCount> per_meter;  // meters with at least one violation, by id
  std::vector<ViolationSample> samples;        // first offending cells in table order
};

struct RuleViolationReport {
  std::vector<RuleViolations> rules;
  std::size_t total = 0;
};

// Scans non-null cells only. Throws UnknownColumnError for a rule on a missing column.
RuleViolationReport rule_violations(const store::ReadingTable& table, std::span<const store::BoundRule> rules);

}  // namespace dhdiag::diag
