#pragma once

#include <array>
#include <optional>
#include <string_view>

namespace dhdiag::diag {

enum class QualityStatus { kGreen, kYellow, kRed, kNone };

// "green", "yellow", "red", "none"
std::string_view to_string(QualityStatus s) noexcept;
std::optional<QualityStatus> parse_status(std::string_view s) noexcept;

// Red > Yellow > Green; None never wins.
QualityStatus worst(QualityStatus a, QualityStatus b) noexcept;

inline constexpr double kAnomalyYellowFrom = 0.05;
inline constexpr double kAnomalyRedAbove = 0.10;
inline constexpr double kNullYellowFrom = 0.05;
inline constexpr double kNullRedAbove = 0.50;
inline constexpr double kSkewGreenUpTo = 0.2;
inline constexpr double kSkewYellowUpTo = 0.5;

QualityStatus anomaly_status(double rate) noexcept;
QualityStatus null_status(double rate) noexcept;
QualityStatus skewness_status(double medcouple) noexcept;

// One band of a gauge dial, as fractions of the scale.
struct GaugeZone {
  double lo = 0.0;
  double hi = 0.0;
  bool lo_inclusive = true;
  bool hi_inclusive = false;
  QualityStatus status = QualityStatus::kNone;
};

// Red 22.5%, yellow 7.5%, green 40%, yellow 7.5%, red 22.5%.
inline constexpr std::array<GaugeZone, 5> kGaugeZones{{
    {0.0, 0.225, true, false, QualityStatus::kRed},
    {0.225, 0.30, true, false, QualityStatus::kYellow},
    {0.30, 0.70, true, true, QualityStatus::kGreen},
    {0.70, 0.775, false, true, QualityStatus::kYellow},
    {0.775, 1.0, false, true, QualityStatus::kRed},
}};

struct GaugeSpec {
  double value = 0.0;
  double scale_min = 0.0;
  double scale_max = 0.0;
  double position = 0.5;
  QualityStatus status = QualityStatus::kNone;
};

// Status of a position in [0, 1].
QualityStatus zone_status(double position) noexcept;

// Throws std::invalid_argument when scale_min > scale_max.
GaugeSpec gauge_status(double value, double scale_min, double scale_max);

}  // namespace dhdiag::diag
