#include "dhdiag/diag/violations.hpp"

namespace dhdiag::diag {

RuleViolationReport rule_violations(const store::ReadingTable& table, std::span<const store::BoundRule> rules) {
  RuleViolationReport report;
  for (const auto& rule : rules) {
    const auto& col = table.column(rule.column);
    RuleViolations v{rule, 0, {}, {}};
    std::vector<std::size_t> per_meter(table.meter_count(), 0);
    for (std::size_t r = 0; r < table.row_count(); ++r) {
      if (!col.valid[r] || !rule.violated_by(col.values[r])) continue;
      ++v.total;
      ++per_meter[table.row_meters()[r]];
      if (v.samples.size() < kMaxViolationSamples)
        v.samples.push_back({table.row_times()[r], table.meter_ids()[table.row_meters()[r]], col.values[r]});
    }
    for (std::size_t m = 0; m < per_meter.size(); ++m)
      if (per_meter[m] > 0) v.per_meter.push_back({table.meter_ids()[m], per_meter[m]});
    report.total += v.total;
    report.rules.push_back(std::move(v));
  }
  return report;
}

}  // namespace dhdiag::diag
