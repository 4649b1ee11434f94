#pragma once

#include <optional>
#include <string_view>

namespace dhdiag::store {

// How far a meter's expected readings extend.
enum class WindowMode {
  kFirstToLast,        // first reading .. last reading of the meter
  kFirstToDatasetEnd,  // first reading .. last timestamp of the dataset
};

std::string_view to_string(WindowMode mode) noexcept;
std::optional<WindowMode> parse_window_mode(std::string_view text) noexcept;

}  // namespace dhdiag::store
