#include "dhdiag/diag/status.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace dhdiag::diag {

std::string_view to_string(QualityStatus s) noexcept {
  switch (s) {
    case QualityStatus::kGreen: return "green";
    case QualityStatus::kYellow: return "yellow";
    case QualityStatus::kRed: return "red";
    case QualityStatus::kNone: break;
  }
  return "none";
}

std::optional<QualityStatus> parse_status(std::string_view s) noexcept {
  for (auto st : {QualityStatus::kGreen, QualityStatus::kYellow, QualityStatus::kRed, QualityStatus::kNone})
    if (to_string(st) == s) return st;
  return std::nullopt;
}

QualityStatus worst(QualityStatus a, QualityStatus b) noexcept {
  auto rank = [](QualityStatus s) {
    switch (s) {
      case QualityStatus::kRed: return 3;
      case QualityStatus::kYellow: return 2;
      case QualityStatus::kGreen: return 1;
      case QualityStatus::kNone: break;
    }
    return 0;
  };
  return rank(a) >= rank(b) ? a : b;
}

QualityStatus anomaly_status(double rate) noexcept {
  if (!std::isfinite(rate)) return QualityStatus::kNone;
  if (rate < kAnomalyYellowFrom) return QualityStatus::kGreen;
  if (rate <= kAnomalyRedAbove) return QualityStatus::kYellow;
  return QualityStatus::kRed;
}

QualityStatus null_status(double rate) noexcept {
  if (!std::isfinite(rate)) return QualityStatus::kNone;
  if (rate < kNullYellowFrom) return QualityStatus::kGreen;
  if (rate <= kNullRedAbove) return QualityStatus::kYellow;
  return QualityStatus::kRed;
}

QualityStatus skewness_status(double medcouple) noexcept {
  if (!std::isfinite(medcouple)) return QualityStatus::kNone;
  const double a = std::abs(medcouple);
  if (a <= kSkewGreenUpTo) return QualityStatus::kGreen;
  if (a <= kSkewYellowUpTo) return QualityStatus::kYellow;
  return QualityStatus::kRed;
}

QualityStatus zone_status(double position) noexcept {
  if (!std::isfinite(position) || position < 0.0 || position > 1.0) return QualityStatus::kNone;
  for (const auto& z : kGaugeZones) {
    const bool above_lo = z.lo_inclusive ? position >= z.lo : position > z.lo;
    const bool below_hi = z.hi_inclusive ? position <= z.hi : position < z.hi;
    if (above_lo && below_hi) return z.status;
  }
  return QualityStatus::kNone;
}

GaugeSpec gauge_status(double value, double scale_min, double scale_max) {
  if (scale_min > scale_max) throw std::invalid_argument("gauge: scale_min > scale_max");
  GaugeSpec g{value, scale_min, scale_max, 0.5, QualityStatus::kNone};
  if (!std::isfinite(value) || !std::isfinite(scale_min) || !std::isfinite(scale_max)) return g;
  if (scale_min == scale_max) return g;
  g.position = std::clamp((value - scale_min) / (scale_max - scale_min), 0.0, 1.0);
  g.status = zone_status(g.position);
  return g;
}

}  // namespace dhdiag::diag
